#include "yspde/drivers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace yspde {

namespace {

// In-place radix-2 FFT (power-of-two length), used by the circulant mode.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw NumericalError("circulant fBm mode needs a power-of-two interval count");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * 3.14159265358979323846264338328 / static_cast<double>(len);
        if (!inverse) ang = -ang;
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                auto u = a[i + j];
                auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

double fbm_cov(double s, double t, double h2) {
    return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

}  // namespace

struct FbmSampler::Impl {
    Eigen::MatrixXd chol;            // lower factor of the node covariance
    std::vector<double> sqrt_eig;    // circulant mode: sqrt(lambda_k / (2M))
};

FbmSampler::FbmSampler(double hurst, const Grid& grid, const FbmOptions& opt)
    : hurst_(hurst), grid_(grid), circulant_(false), impl_(new Impl) {
    if (!(hurst > 0.5 && hurst < 1.0))
        throw ConfigError("Hurst parameter must lie in (1/2, 1)");
    int n = grid.intervals();
    if (n > opt.cholesky_cap && !opt.circulant)
        throw ConfigError("grid exceeds the Cholesky cap (" + std::to_string(opt.cholesky_cap) +
                          " intervals); enable circulant mode for larger grids");
    circulant_ = opt.circulant && n > opt.cholesky_cap;
    double h2 = 2.0 * hurst;
    if (!circulant_) {
        Eigen::MatrixXd cov(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                cov(i, j) = fbm_cov(grid.node(i + 1), grid.node(j + 1), h2);
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success) {
            double jitter = 1e-12 * cov.diagonal().maxCoeff();
            cov.diagonal().array() += jitter;
            llt.compute(cov);
            if (llt.info() != Eigen::Success)
                throw NumericalError("fBm covariance factorization failed even with jitter");
        }
        impl_->chol = llt.matrixL();
    } else {
        // Eigenvalues of the circulant embedding of the increment covariance.
        std::size_t mlen = 2 * static_cast<std::size_t>(n);
        double dt2h = std::pow(grid.dt(), h2);
        auto rho = [&](double k) {
            return 0.5 * (std::pow(std::abs(k - 1.0), h2) - 2.0 * std::pow(k, h2) +
                          std::pow(k + 1.0, h2)) * dt2h;
        };
        std::vector<std::complex<double>> row(mlen);
        for (int k = 0; k <= n; ++k) row[k] = rho(static_cast<double>(k));
        for (int k = 1; k < n; ++k) row[mlen - k] = row[k];
        fft_pow2(row, false);
        impl_->sqrt_eig.resize(mlen);
        double floor_tol = -1e-9 * std::abs(row[0].real());
        for (std::size_t k = 0; k < mlen; ++k) {
            double lam = row[k].real();
            if (lam < floor_tol)
                throw NumericalError("circulant embedding produced a significantly negative "
                                     "eigenvalue");
            impl_->sqrt_eig[k] = std::sqrt(std::max(lam, 0.0) / static_cast<double>(mlen));
        }
    }
}

FbmSampler::~FbmSampler() { delete impl_; }
FbmSampler::FbmSampler(FbmSampler&& o) noexcept
    : hurst_(o.hurst_), grid_(o.grid_), circulant_(o.circulant_), impl_(o.impl_) {
    o.impl_ = nullptr;
}
FbmSampler& FbmSampler::operator=(FbmSampler&& o) noexcept {
    std::swap(impl_, o.impl_);
    hurst_ = o.hurst_;
    grid_ = o.grid_;
    circulant_ = o.circulant_;
    return *this;
}

DriverPath FbmSampler::sample(RngStream& rng, int dims) const {
    int n = grid_.intervals();
    DriverPath path(grid_, dims);
    path.kind = "fbm";
    path.alpha_nominal = hurst_ - 0.05;
    if (!circulant_) {
        Eigen::VectorXd z(n);
        for (int d = 0; d < dims; ++d) {
            for (int i = 0; i < n; ++i) z(i) = rng.gaussian();
            Eigen::VectorXd b = impl_->chol.triangularView<Eigen::Lower>() * z;
            for (int i = 0; i < n; ++i) path.at(i + 1, d) = b(i);
        }
    } else {
        std::size_t mlen = impl_->sqrt_eig.size();
        std::size_t half = mlen / 2;
        std::vector<std::complex<double>> a(mlen);
        for (int d = 0; d < dims; ++d) {
            a[0] = impl_->sqrt_eig[0] * rng.gaussian();
            a[half] = impl_->sqrt_eig[half] * rng.gaussian();
            for (std::size_t k = 1; k < half; ++k) {
                double re = rng.gaussian();
                double im = rng.gaussian();
                std::complex<double> v(re, im);
                a[k] = impl_->sqrt_eig[k] * v * std::sqrt(0.5);
                a[mlen - k] = std::conj(a[k]);
            }
            fft_pow2(a, false);
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += a[i].real();
                path.at(i + 1, d) = acc;
            }
        }
    }
    return path;
}

DriverPath sample_fbm(double hurst, const Grid& grid, RngStream& rng, int dims,
                      const FbmOptions& opt) {
    FbmSampler sampler(hurst, grid, opt);
    return sampler.sample(rng, dims);
}

DriverPath sample_bm(const Grid& grid, RngStream& rng, int dims) {
    DriverPath path(grid, dims);
    path.kind = "bm";
    path.alpha_nominal = 0.45;
    double sdt = std::sqrt(grid.dt());
    for (int k = 1; k < grid.nodes(); ++k)
        for (int d = 0; d < dims; ++d) path.at(k, d) = path.at(k - 1, d) + sdt * rng.gaussian();
    return path;
}

DriverPath deterministic_driver(const std::string& formula_id,
                                const std::vector<double>& params, const Grid& grid) {
    DriverPath path(grid, 1);
    path.kind = "deterministic:" + formula_id;
    if (formula_id == "linear") {
        double c = params.empty() ? 1.0 : params[0];
        path.alpha_nominal = 1.0;
        for (int k = 0; k < grid.nodes(); ++k) path.at(k, 0) = c * grid.node(k);
    } else if (formula_id == "sine") {
        double c = params.empty() ? 1.0 : params[0];
        double omega = params.size() > 1 ? params[1] : 1.0;
        path.alpha_nominal = 1.0;
        for (int k = 0; k < grid.nodes(); ++k) path.at(k, 0) = c * std::sin(omega * grid.node(k));
    } else if (formula_id == "power") {
        double c = params.empty() ? 1.0 : params[0];
        double a = params.size() > 1 ? params[1] : 0.75;
        if (!(a > 0.5 && a <= 1.0))
            throw ConfigError("power driver exponent must lie in (1/2, 1]");
        path.alpha_nominal = a;
        for (int k = 0; k < grid.nodes(); ++k) path.at(k, 0) = c * std::pow(grid.node(k), a);
    } else {
        throw ConfigError("unknown deterministic driver formula '" + formula_id +
                          "' (expected linear, sine or power)");
    }
    return path;
}

}  // namespace yspde
