#ifndef RISHBF_PHASE_HPP
#define RISHBF_PHASE_HPP

#include <Eigen/Dense>
#include <complex>
#include <random>

namespace rishbf {

/// Angle m * pi / 2^(b-1) of codebook index m (m may be negative for differences).
double phase_angle(int m, int bits);

/// cos / sin of m * pi / 2^(b-1), exact (0, +-1) whenever the angle is a
/// multiple of pi/2.
double codebook_cos(int m, int bits);
double codebook_sin(int m, int bits);

/// RIS element response (j + e^{j theta}) / 2.
std::complex<double> q_of_theta(double theta);

/// Response of codebook index m using the exact trig values above, so the
/// off state m = 3 * 2^(b-2) yields exactly 0.
std::complex<double> q_of_index(int m, int bits);

/// Integer phase indices m(l1, l2) in {0, ..., 2^b - 1} for an n_r x n_r RIS.
class PhaseIndexMatrix {
public:
    PhaseIndexMatrix() = default;
    PhaseIndexMatrix(int n_r, int bits, int fill = 0);
    PhaseIndexMatrix(Eigen::MatrixXi m, int bits);

    /// Every element at index round(2^(b-2)), i.e. theta ~ pi/2 (|q| = 1);
    /// for b = 1 this is m = 1 (theta = pi).
    static PhaseIndexMatrix max_amplitude(int n_r, int bits);
    static PhaseIndexMatrix uniform_random(int n_r, int bits, std::mt19937_64& rng);

    int n_r() const { return static_cast<int>(m_.rows()); }
    int bits() const { return bits_; }
    int num_phases() const { return 1 << bits_; }
    int num_elements() const { return static_cast<int>(m_.size()); }

    int operator()(int l1, int l2) const { return m_(l1, l2); }
    int& operator()(int l1, int l2) { return m_(l1, l2); }
    /// Linear element index p = l1 * n_r + l2.
    int at(int p) const { return m_(p / n_r(), p % n_r()); }
    void set(int p, int m) { m_(p / n_r(), p % n_r()) = m; }

    double theta(int l1, int l2) const { return phase_angle(m_(l1, l2), bits_); }
    Eigen::VectorXd thetas() const;
    /// Responses q_p in linear element order.
    Eigen::VectorXcd responses() const;

    const Eigen::MatrixXi& indices() const { return m_; }

    /// Throws std::invalid_argument when an entry is out of range.
    void validate() const;

    friend bool operator==(const PhaseIndexMatrix& a, const PhaseIndexMatrix& b)
    {
        return a.bits_ == b.bits_ && a.m_ == b.m_;
    }

private:
    Eigen::MatrixXi m_;
    int bits_ = 1;
};

}  // namespace rishbf

#endif  // RISHBF_PHASE_HPP
