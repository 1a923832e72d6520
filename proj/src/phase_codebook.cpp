#include "rishbf/phase_codebook.hpp"

#include "rishbf/errors.hpp"
#include "rishbf/linalg.hpp"

#include <cmath>
#include <string>

namespace rishbf {

namespace {

constexpr double kBinaryTol = 1e-9;

int one_hot_slot(const Eigen::VectorXd& v, int length)
{
    if (v.size() != length) {
        throw NotInCodebook("one-hot vector has length " + std::to_string(v.size()) + ", expected " +
                            std::to_string(length));
    }
    int slot = -1;
    for (int i = 0; i < length; ++i) {
        const double xi = v(i);
        if (std::abs(xi - 1.0) <= kBinaryTol) {
            if (slot >= 0) {
                throw NotInCodebook("one-hot vector has more than one active slot");
            }
            slot = i;
        } else if (std::abs(xi) > kBinaryTol) {
            throw NotInCodebook("one-hot vector has a non-binary entry");
        }
    }
    if (slot < 0) {
        throw NotInCodebook("one-hot vector has no active slot");
    }
    return slot;
}

}  // namespace

PhaseCodebook::PhaseCodebook(int bits) : bits_(bits)
{
    if (bits < 1 || bits > 16) {
        throw std::invalid_argument("codebook bits must be in [1, 16]");
    }
    const int len = length();
    a_.resize(len);
    c_.resize(len);
    s_.resize(len);
    e_ = Eigen::VectorXd::Zero(len);
    for (int i = 0; i < len; ++i) {
        const int m = slot_multiple(i);
        a_(i) = phase_angle(m, bits);
        c_(i) = codebook_cos(m, bits);
        s_(i) = codebook_sin(m, bits);
        if (m < 0) {
            e_(i) = 1.0;
        }
    }
}

int PhaseCodebook::phase_index(double theta) const
{
    const double scaled = theta / kPi * static_cast<double>(1 << (bits_ - 1));
    const double m = std::round(scaled);
    if (std::abs(scaled - m) > 1e-9 || m < 0 || m >= num_phases()) {
        throw NotInCodebook("phase " + std::to_string(theta) + " is not in the " + std::to_string(bits_) +
                            "-bit codebook");
    }
    return static_cast<int>(m);
}

Eigen::VectorXd PhaseCodebook::encode(double theta) const
{
    return encode_index(phase_index(theta));
}

Eigen::VectorXd PhaseCodebook::encode_index(int m) const
{
    if (m < 0 || m >= num_phases()) {
        throw NotInCodebook("phase index out of range");
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(length());
    x(phase_slot(m)) = 1.0;
    return x;
}

Eigen::VectorXd PhaseCodebook::encode_difference(int dm) const
{
    if (dm <= -num_phases() || dm >= num_phases()) {
        throw NotInCodebook("phase difference out of range");
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(length());
    y(difference_slot(dm)) = 1.0;
    return y;
}

int PhaseCodebook::decode_index(const Eigen::VectorXd& x) const
{
    const int slot = one_hot_slot(x, length());
    if (e_(slot) != 0.0) {
        throw NotInCodebook("one-hot phase selects a masked (negative) slot");
    }
    return slot_multiple(slot);
}

double PhaseCodebook::decode(const Eigen::VectorXd& x) const
{
    return a_(phase_slot(decode_index(x)));
}

int pair_index(int p, int p_prime, int elements)
{
    if (p < 0 || p >= p_prime || p_prime >= elements) {
        throw std::out_of_range("pair_index requires 0 <= p < p' < elements");
    }
    // pairs with first index < p come first
    return p * elements - p * (p + 1) / 2 + (p_prime - p - 1);
}

PairGrams::PairGrams(const ChannelTensor& channel, const Eigen::VectorXcd& phi, const Eigen::VectorXd& powers)
    : elements_(channel.num_elements()), k_users_(channel.k_users)
{
    if (phi.size() != k_users_ || powers.size() != k_users_) {
        throw DimensionMismatch("PairGrams: phi/powers must have K entries");
    }
    if ((powers.array() <= 0).any()) {
        throw std::invalid_argument("PairGrams: powers must be positive");
    }
    const Eigen::VectorXcd row_scale = (phi.array() / powers.array().sqrt().cast<cdouble>()).matrix();
    scaled_.reserve(static_cast<std::size_t>(elements_));
    for (int p = 0; p < elements_; ++p) {
        scaled_.push_back(row_scale.asDiagonal() * channel.h_total[static_cast<std::size_t>(p)]);
    }
    grams_.resize(static_cast<std::size_t>(elements_ * elements_));
    for (int p = 0; p < elements_; ++p) {
        for (int q = 0; q < elements_; ++q) {
            grams_[static_cast<std::size_t>(p * elements_ + q)] = scaled_[static_cast<std::size_t>(p)] *
                                                                 scaled_[static_cast<std::size_t>(q)].adjoint();
        }
    }
}

Eigen::MatrixXcd gram_affine_expansion(const PairGrams& grams, const PhaseCodebook& codebook,
                                       const std::vector<Eigen::VectorXd>& x,
                                       const std::vector<Eigen::VectorXd>& y)
{
    const int elements = grams.elements();
    if (static_cast<int>(x.size()) != elements || static_cast<int>(y.size()) != num_pairs(elements)) {
        throw DimensionMismatch("gram_affine_expansion: wrong number of x or y blocks");
    }
    const Eigen::VectorXd& a = codebook.angles();
    const Eigen::VectorXd& c = codebook.cosines();
    const Eigen::VectorXd& s = codebook.sines();

    Eigen::VectorXd cos_t(elements), sin_t(elements);
    for (int p = 0; p < elements; ++p) {
        codebook.decode_index(x[static_cast<std::size_t>(p)]);  // validates one-hot and mask
        cos_t(p) = x[static_cast<std::size_t>(p)].dot(c);
        sin_t(p) = x[static_cast<std::size_t>(p)].dot(s);
    }

    const int k = grams.k_users();
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(k, k);
    for (int p = 0; p < elements; ++p) {
        g += grams(p, p) * (0.25 * (2.0 + 2.0 * sin_t(p)));
    }
    for (int p = 0; p < elements; ++p) {
        for (int q = p + 1; q < elements; ++q) {
            const Eigen::VectorXd& yv = y[static_cast<std::size_t>(pair_index(p, q, elements))];
            try {
                one_hot_slot(yv, codebook.length());
            } catch (const NotInCodebook& e) {
                throw InconsistentPair(std::string("pair vector: ") + e.what());
            }
            const double lhs = a.dot(x[static_cast<std::size_t>(p)] - x[static_cast<std::size_t>(q)]);
            const double rhs = a.dot(yv);
            if (std::abs(lhs - rhs) > 1e-9) {
                throw InconsistentPair("a^T(x - x') != a^T y for pair (" + std::to_string(p) + ", " +
                                       std::to_string(q) + ")");
            }
            const cdouble factor(1.0 + sin_t(p) + sin_t(q) + yv.dot(c), yv.dot(s) + cos_t(q) - cos_t(p));
            g += hermitian_sum((0.25 * factor) * grams(p, q));
        }
    }
    return g;
}

void encode_configuration(const PhaseCodebook& codebook, const PhaseIndexMatrix& phases,
                          std::vector<Eigen::VectorXd>& x, std::vector<Eigen::VectorXd>& y)
{
    const int elements = phases.num_elements();
    x.clear();
    y.clear();
    for (int p = 0; p < elements; ++p) {
        x.push_back(codebook.encode_index(phases.at(p)));
    }
    for (int p = 0; p < elements; ++p) {
        for (int q = p + 1; q < elements; ++q) {
            y.push_back(codebook.encode_difference(phases.at(p) - phases.at(q)));
        }
    }
}

Eigen::MatrixXcd scaled_gram(const Eigen::MatrixXcd& f, const Eigen::VectorXd& powers)
{
    if (powers.size() != f.rows()) {
        throw DimensionMismatch("scaled_gram: powers must have K entries");
    }
    const Eigen::VectorXd inv_sqrt = powers.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXcd ft = inv_sqrt.cast<cdouble>().asDiagonal() * f;
    return ft * ft.adjoint();
}

}  // namespace rishbf
