#include "rishbf/phase.hpp"

#include "rishbf/config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rishbf {

namespace {

// Returns the quarter-turn count when m*pi/2^(b-1) is a multiple of pi/2, else -1.
int quarter_turns(int m, int bits)
{
    if (bits == 1) {
        return ((2 * m) % 4 + 4) % 4;
    }
    const int step = 1 << (bits - 2);  // indices per quarter turn
    if (m % step != 0) {
        return -1;
    }
    return ((m / step) % 4 + 4) % 4;
}

}  // namespace

double phase_angle(int m, int bits)
{
    return m * kPi / static_cast<double>(1 << (bits - 1));
}

double codebook_cos(int m, int bits)
{
    static constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
    const int q = quarter_turns(m, bits);
    return q >= 0 ? kCos[q] : std::cos(phase_angle(m, bits));
}

double codebook_sin(int m, int bits)
{
    static constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
    const int q = quarter_turns(m, bits);
    return q >= 0 ? kSin[q] : std::sin(phase_angle(m, bits));
}

std::complex<double> q_of_theta(double theta)
{
    return 0.5 * (std::complex<double>(0.0, 1.0) + std::polar(1.0, theta));
}

std::complex<double> q_of_index(int m, int bits)
{
    return {0.5 * codebook_cos(m, bits), 0.5 * (1.0 + codebook_sin(m, bits))};
}

PhaseIndexMatrix::PhaseIndexMatrix(int n_r, int bits, int fill)
    : m_(Eigen::MatrixXi::Constant(n_r, n_r, fill)), bits_(bits)
{
    validate();
}

PhaseIndexMatrix::PhaseIndexMatrix(Eigen::MatrixXi m, int bits) : m_(std::move(m)), bits_(bits)
{
    if (m_.rows() != m_.cols()) {
        throw std::invalid_argument("phase index matrix must be square");
    }
    validate();
}

PhaseIndexMatrix PhaseIndexMatrix::max_amplitude(int n_r, int bits)
{
    const int m = bits == 1 ? 1 : 1 << (bits - 2);
    return PhaseIndexMatrix(n_r, bits, m);
}

PhaseIndexMatrix PhaseIndexMatrix::uniform_random(int n_r, int bits, std::mt19937_64& rng)
{
    PhaseIndexMatrix out(n_r, bits, 0);
    std::uniform_int_distribution<int> pick(0, (1 << bits) - 1);
    for (int p = 0; p < n_r * n_r; ++p) {
        out.set(p, pick(rng));
    }
    return out;
}

Eigen::VectorXd PhaseIndexMatrix::thetas() const
{
    Eigen::VectorXd t(num_elements());
    for (int p = 0; p < num_elements(); ++p) {
        t(p) = phase_angle(at(p), bits_);
    }
    return t;
}

Eigen::VectorXcd PhaseIndexMatrix::responses() const
{
    Eigen::VectorXcd q(num_elements());
    for (int p = 0; p < num_elements(); ++p) {
        q(p) = q_of_index(at(p), bits_);
    }
    return q;
}

void PhaseIndexMatrix::validate() const
{
    if (bits_ < 1 || bits_ > 16) {
        throw std::invalid_argument("phase bits must be in [1, 16]");
    }
    const int hi = (1 << bits_) - 1;
    if (m_.size() > 0 && (m_.minCoeff() < 0 || m_.maxCoeff() > hi)) {
        throw std::invalid_argument("phase index out of range [0, " + std::to_string(hi) + "]");
    }
}

}  // namespace rishbf
