#include "rishbf/channel.hpp"

#include "rishbf/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

namespace rishbf {

namespace {

template <typename T>
void put_le(std::ostream& out, T value)
{
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes, bytes + sizeof(T));
    }
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in)
{
    unsigned char bytes[sizeof(T)];
    in.read(reinterpret_cast<char*>(bytes), sizeof(T));
    if (!in) {
        throw Error("truncated channel dump");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes, bytes + sizeof(T));
    }
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

constexpr char kMagic[8] = {'R', 'I', 'S', 'C', 'H', 'A', 'N', '1'};

}  // namespace

ChannelTensor synthesize_channel(const SystemConfig& cfg, const GeometrySolution& geom, std::mt19937_64& rng)
{
    cfg.validate();
    const int elements = cfg.num_elements();
    if (geom.n_r != cfg.n_r || geom.d_bs_ris.rows() != cfg.n_t || geom.d_ris_user.rows() != cfg.k_users) {
        throw DimensionMismatch("geometry does not match configuration");
    }

    ChannelTensor ch;
    ch.k_users = cfg.k_users;
    ch.n_t = cfg.n_t;
    ch.n_r = cfg.n_r;
    ch.wave_number_beta = cfg.beta;
    ch.h_los.assign(static_cast<std::size_t>(elements), Eigen::MatrixXcd::Zero(cfg.k_users, cfg.n_t));
    ch.h_total = ch.h_los;

    ch.pathloss_los.resize(cfg.k_users);
    for (int k = 0; k < cfg.k_users; ++k) {
        ch.pathloss_los(k) = std::pow(cfg.d_00 + geom.d_ris_user(k, 0), -cfg.alpha);
    }

    const double k_phase = cfg.beta * 2.0 * kPi / cfg.wavelength;
    for (int p = 0; p < elements; ++p) {
        for (int k = 0; k < cfg.k_users; ++k) {
            for (int n = 0; n < cfg.n_t; ++n) {
                const double path = geom.d_bs_ris(n, p) + geom.d_ris_user(k, p);
                ch.h_los[static_cast<std::size_t>(p)](k, n) = std::polar(ch.pathloss_los(k), -k_phase * path);
            }
        }
    }

    if (!cfg.rician_on) {
        ch.h_total = ch.h_los;
        return ch;
    }

    const double los_weight = std::sqrt(cfg.kappa / (1.0 + cfg.kappa));
    const double nlos_weight = std::sqrt(1.0 / (1.0 + cfg.kappa));
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    for (int k = 0; k < cfg.k_users; ++k) {
        for (int n = 0; n < cfg.n_t; ++n) {
            for (int p = 0; p < elements; ++p) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                const double path = geom.d_bs_ris(n, p) + geom.d_ris_user(k, p);
                const double pl = std::pow(path, -cfg.alpha);
                auto& cell = ch.h_total[static_cast<std::size_t>(p)](k, n);
                cell = los_weight * ch.h_los[static_cast<std::size_t>(p)](k, n) +
                       nlos_weight * pl * std::complex<double>(re, im);
            }
        }
    }
    return ch;
}

ChannelTensor synthesize_channel(const SystemConfig& cfg, DistanceModel mode)
{
    std::mt19937_64 rng(cfg.seed);
    return synthesize_channel(cfg, build_geometry(cfg, mode), rng);
}

Eigen::MatrixXcd assemble_f(const ChannelTensor& channel, const Eigen::VectorXcd& q, const Eigen::VectorXcd& phi)
{
    if (q.size() != channel.num_elements() || phi.size() != channel.k_users) {
        throw DimensionMismatch("assemble_f: response or phi length mismatch");
    }
    Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(channel.k_users, channel.n_t);
    for (int p = 0; p < channel.num_elements(); ++p) {
        f.noalias() += q(p) * channel.h_total[static_cast<std::size_t>(p)];
    }
    return phi.asDiagonal() * f;
}

Eigen::MatrixXcd assemble_f(const ChannelTensor& channel, const PhaseIndexMatrix& phases, const Eigen::VectorXcd& phi)
{
    if (phases.n_r() != channel.n_r) {
        throw DimensionMismatch("assemble_f: phase matrix size mismatch");
    }
    return assemble_f(channel, phases.responses(), phi);
}

Eigen::MatrixXcd assemble_f_from_thetas(const ChannelTensor& channel, const Eigen::VectorXd& thetas,
                                        const Eigen::VectorXcd& phi)
{
    Eigen::VectorXcd q(thetas.size());
    for (Eigen::Index p = 0; p < thetas.size(); ++p) {
        q(p) = q_of_theta(thetas(p));
    }
    return assemble_f(channel, q, phi);
}

Eigen::VectorXd user_rates(const Eigen::MatrixXcd& f, const Eigen::MatrixXcd& v_d, double noise_power)
{
    if (f.cols() != v_d.rows() || f.rows() != v_d.cols()) {
        throw DimensionMismatch("user_rates: F is K x N_t and V_D must be N_t x K");
    }
    const Eigen::MatrixXd gains = (f * v_d).cwiseAbs2();
    Eigen::VectorXd rates(f.rows());
    for (Eigen::Index k = 0; k < f.rows(); ++k) {
        const double signal = gains(k, k);
        const double interference = gains.row(k).sum() - signal;
        rates(k) = std::log2(1.0 + signal / (interference + noise_power));
    }
    return rates;
}

void write_channel_binary(std::ostream& out, const ChannelTensor& channel)
{
    out.write(kMagic, sizeof(kMagic));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(channel.k_users));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(channel.n_t));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(channel.n_r));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(channel.n_r));
    put_le<double>(out, channel.wave_number_beta);
    for (int k = 0; k < channel.k_users; ++k) {
        put_le<double>(out, channel.pathloss_los(k));
    }
    for (const auto* tensor : {&channel.h_los, &channel.h_total}) {
        for (int k = 0; k < channel.k_users; ++k) {
            for (int n = 0; n < channel.n_t; ++n) {
                for (int p = 0; p < channel.num_elements(); ++p) {
                    const auto v = (*tensor)[static_cast<std::size_t>(p)](k, n);
                    put_le<double>(out, v.real());
                    put_le<double>(out, v.imag());
                }
            }
        }
    }
    if (!out) {
        throw Error("failed writing channel dump");
    }
}

ChannelTensor read_channel_binary(std::istream& in)
{
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw Error("not a channel dump (bad magic)");
    }
    ChannelTensor ch;
    ch.k_users = static_cast<int>(get_le<std::uint64_t>(in));
    ch.n_t = static_cast<int>(get_le<std::uint64_t>(in));
    ch.n_r = static_cast<int>(get_le<std::uint64_t>(in));
    if (static_cast<int>(get_le<std::uint64_t>(in)) != ch.n_r) {
        throw Error("channel dump: non-square RIS shape");
    }
    ch.wave_number_beta = get_le<double>(in);
    ch.pathloss_los.resize(ch.k_users);
    for (int k = 0; k < ch.k_users; ++k) {
        ch.pathloss_los(k) = get_le<double>(in);
    }
    const auto elements = static_cast<std::size_t>(ch.num_elements());
    for (auto* tensor : {&ch.h_los, &ch.h_total}) {
        tensor->assign(elements, Eigen::MatrixXcd::Zero(ch.k_users, ch.n_t));
        for (int k = 0; k < ch.k_users; ++k) {
            for (int n = 0; n < ch.n_t; ++n) {
                for (std::size_t p = 0; p < elements; ++p) {
                    const double re = get_le<double>(in);
                    const double im = get_le<double>(in);
                    (*tensor)[p](k, n) = {re, im};
                }
            }
        }
    }
    return ch;
}

void write_channel_csv(std::ostream& out, const ChannelTensor& channel)
{
    out << "k,n,l1,l2,los_re,los_im,total_re,total_im\n";
    out.precision(17);
    for (int k = 0; k < channel.k_users; ++k) {
        for (int n = 0; n < channel.n_t; ++n) {
            for (int l1 = 0; l1 < channel.n_r; ++l1) {
                for (int l2 = 0; l2 < channel.n_r; ++l2) {
                    const auto a = channel.los(k, n, l1, l2);
                    const auto b = channel.total(k, n, l1, l2);
                    out << k << ',' << n << ',' << l1 << ',' << l2 << ',' << a.real() << ',' << a.imag() << ','
                        << b.real() << ',' << b.imag() << '\n';
                }
            }
        }
    }
}

}  // namespace rishbf
