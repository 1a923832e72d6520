#ifndef RISHBF_PHASE_CODEBOOK_HPP
#define RISHBF_PHASE_CODEBOOK_HPP

#include "rishbf/channel.hpp"

#include <Eigen/Dense>
#include <vector>

namespace rishbf {

/// One-hot encoding of b-bit phases and of phase differences.
///
/// Slot i (0 <= i < L = 2^{b+1} - 1) stands for the angle
/// (i - (2^b - 1)) * pi / 2^{b-1}; the first 2^b - 1 slots are the negative
/// angles, which only phase differences may use.
class PhaseCodebook {
public:
    explicit PhaseCodebook(int bits);

    int bits() const { return bits_; }
    int num_phases() const { return 1 << bits_; }
    int length() const { return 2 * num_phases() - 1; }
    int offset() const { return num_phases() - 1; }

    const Eigen::VectorXd& angles() const { return a_; }
    const Eigen::VectorXd& cosines() const { return c_; }
    const Eigen::VectorXd& sines() const { return s_; }
    const Eigen::VectorXd& negative_mask() const { return e_; }

    /// Slot of phase index m in {0, ..., 2^b - 1}.
    int phase_slot(int m) const { return m + offset(); }
    /// Slot of index difference dm in {-(2^b - 1), ..., 2^b - 1}.
    int difference_slot(int dm) const { return dm + offset(); }
    /// Signed index multiple (i - offset) of slot i.
    int slot_multiple(int slot) const { return slot - offset(); }

    /// Phase index m of theta; throws NotInCodebook when theta is off-grid.
    int phase_index(double theta) const;

    Eigen::VectorXd encode(double theta) const;
    Eigen::VectorXd encode_index(int m) const;
    Eigen::VectorXd encode_difference(int dm) const;

    /// Throws NotInCodebook unless x is a valid masked one-hot vector.
    double decode(const Eigen::VectorXd& x) const;
    int decode_index(const Eigen::VectorXd& x) const;

private:
    int bits_;
    Eigen::VectorXd a_, c_, s_, e_;
};

/// Number of unordered element pairs p < p' and their lexicographic index.
inline int num_pairs(int elements) { return elements * (elements - 1) / 2; }
int pair_index(int p, int p_prime, int elements);

/// A_{p,p'} = P^{-1/2} (H_p o Phi)(H_{p'} o Phi)^H P^{-1/2} for every ordered pair.
class PairGrams {
public:
    PairGrams(const ChannelTensor& channel, const Eigen::VectorXcd& phi, const Eigen::VectorXd& powers);

    int elements() const { return elements_; }
    int k_users() const { return k_users_; }
    const Eigen::MatrixXcd& operator()(int p, int p_prime) const
    {
        return grams_[static_cast<std::size_t>(p * elements_ + p_prime)];
    }
    /// Row-scaled element matrix P^{-1/2} (H_p o Phi).
    const Eigen::MatrixXcd& scaled_element(int p) const { return scaled_[static_cast<std::size_t>(p)]; }

private:
    int elements_;
    int k_users_;
    std::vector<Eigen::MatrixXcd> scaled_;
    std::vector<Eigen::MatrixXcd> grams_;
};

/// F~F~^H assembled from the one-hot phase vectors x_p (one per element) and
/// the pair vectors y (one per p < p', in pair_index order), using
///   (j + e^{j t})(-j + e^{-j t'}) = 1 + sin t + sin t' + cos(t - t')
///                                   + j (sin(t - t') + cos t' - cos t).
/// Throws InconsistentPair when a^T (x_p - x_p') != a^T y_{p,p'}.
Eigen::MatrixXcd gram_affine_expansion(const PairGrams& grams, const PhaseCodebook& codebook,
                                       const std::vector<Eigen::VectorXd>& x,
                                       const std::vector<Eigen::VectorXd>& y);

/// One-hot x and y blocks of a phase configuration.
void encode_configuration(const PhaseCodebook& codebook, const PhaseIndexMatrix& phases,
                          std::vector<Eigen::VectorXd>& x, std::vector<Eigen::VectorXd>& y);

/// Direct P^{-1/2} F F^H P^{-1/2}.
Eigen::MatrixXcd scaled_gram(const Eigen::MatrixXcd& f, const Eigen::VectorXd& powers);

}  // namespace rishbf

#endif  // RISHBF_PHASE_CODEBOOK_HPP
