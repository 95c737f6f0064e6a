#include <doctest.h>

#include <cmath>

#include "yspde/drivers.hpp"
#include "yspde/paths.hpp"
#include "yspde/rng.hpp"

using namespace yspde;

namespace {

double fbm_cov_exact(double s, double t, double hurst) {
    double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

}  // namespace

TEST_CASE("rng streams replay bit-for-bit and split independently") {
    RngStream a(42, 3), b(42, 3), c(42, 4);
    for (int i = 0; i < 100; ++i) {
        double x = a.gaussian();
        CHECK(x == b.gaussian());
    }
    RngStream a2(42, 3);
    bool any_diff = false;
    for (int i = 0; i < 10; ++i) any_diff = any_diff || (a2.gaussian() != c.gaussian());
    CHECK(any_diff);
}

TEST_CASE("fbm sampling reproduces bitwise for equal streams") {
    Grid g(1.0, 64, 0);
    FbmSampler sampler(0.75, g, {});
    RngStream r1(7, 0), r2(7, 0);
    DriverPath p1 = sampler.sample(r1, 2);
    DriverPath p2 = sampler.sample(r2, 2);
    for (int k = 0; k < g.nodes(); ++k)
        for (int d = 0; d < 2; ++d) CHECK(p1.at(k, d) == p2.at(k, d));
    CHECK(p1.at(0, 0) == 0.0);
    CHECK(p1.kind == "fbm");
}

TEST_CASE("fbm increment variance matches the closed form (H = 0.75)") {
    // E[(B_{0.5} - B_{0.25})^2] = 0.25^{1.5} = 0.125, checked within 3 SE
    Grid g(1.0, 8, 0);
    FbmSampler sampler(0.75, g, {});
    int m = 10000;
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < m; ++i) {
        RngStream rng(2027, static_cast<std::uint64_t>(i));
        DriverPath p = sampler.sample(rng, 1);
        double d = p.at(4, 0) - p.at(2, 0);
        acc += d * d;
        acc2 += d * d * d * d;
    }
    double mean = acc / m;
    double var_of_sq = acc2 / m - mean * mean;
    double se = std::sqrt(var_of_sq / m);
    CHECK(std::abs(mean - 0.125) <= 3.0 * se);
}

TEST_CASE("fbm empirical covariance on an 8x8 grid, three Hurst values") {
    Grid g(1.0, 8, 0);
    int m = 10000;
    for (double hurst : {0.6, 0.75, 0.9}) {
        FbmSampler sampler(hurst, g, {});
        std::vector<std::vector<double>> paths(m);
        for (int i = 0; i < m; ++i) {
            RngStream rng(555, static_cast<std::uint64_t>(i));
            DriverPath p = sampler.sample(rng, 1);
            paths[i].resize(9);
            for (int k = 0; k <= 8; ++k) paths[i][k] = p.at(k, 0);
        }
        double worst = 0.0;
        for (int a = 1; a <= 8; ++a)
            for (int b = 1; b <= 8; ++b) {
                double acc = 0.0;
                for (int i = 0; i < m; ++i) acc += paths[i][a] * paths[i][b];
                double got = acc / m;
                double want = fbm_cov_exact(g.node(a), g.node(b), hurst);
                worst = std::max(worst, std::abs(got - want));
            }
        CHECK(worst < 5e-2);
    }
}

TEST_CASE("fbm rejects Hurst outside (1/2,1); near 1/2 covariance ~ min(s,t)") {
    Grid g(1.0, 8, 0);
    CHECK_THROWS_AS(FbmSampler(0.5, g, {}), ConfigError);
    CHECK_THROWS_AS(FbmSampler(1.0, g, {}), ConfigError);
    FbmSampler sampler(0.501, g, {});
    int m = 4000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
        RngStream rng(9, static_cast<std::uint64_t>(i));
        DriverPath p = sampler.sample(rng, 1);
        acc += p.at(2, 0) * p.at(6, 0);  // cov ~ min(0.25, 0.75) = 0.25
    }
    CHECK(acc / m == doctest::Approx(0.25).epsilon(0.15));
}

TEST_CASE("fbm variance at t = 1 equals 1 for any Hurst") {
    Grid g(1.0, 4, 0);
    for (double hurst : {0.6, 0.9}) {
        FbmSampler sampler(hurst, g, {});
        int m = 8000;
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            RngStream rng(777, static_cast<std::uint64_t>(i));
            DriverPath p = sampler.sample(rng, 1);
            acc += p.at(4, 0) * p.at(4, 0);
        }
        CHECK(acc / m == doctest::Approx(1.0).epsilon(0.06));
    }
}

TEST_CASE("circulant mode matches the Cholesky law") {
    Grid g(1.0, 64, 0);
    FbmOptions co;
    co.cholesky_cap = 16;  // force the circulant branch
    co.circulant = true;
    FbmSampler circ(0.75, g, co);
    CHECK(circ.circulant_mode());
    int m = 6000;
    double v_half = 0.0, cov = 0.0;
    for (int i = 0; i < m; ++i) {
        RngStream rng(31337, static_cast<std::uint64_t>(i));
        DriverPath p = circ.sample(rng, 1);
        v_half += p.at(32, 0) * p.at(32, 0);
        cov += p.at(16, 0) * p.at(48, 0);
    }
    v_half /= m;
    cov /= m;
    CHECK(v_half == doctest::Approx(std::pow(0.5, 1.5)).epsilon(0.08));
    CHECK(cov == doctest::Approx(fbm_cov_exact(0.25, 0.75, 0.75)).epsilon(0.10));

    FbmOptions plain;
    plain.cholesky_cap = 16;
    CHECK_THROWS_AS(FbmSampler(0.75, g, plain), ConfigError);

    Grid odd(1.0, 3, 3);  // 24 intervals: circulant needs a power of two
    FbmOptions co2;
    co2.cholesky_cap = 2;
    co2.circulant = true;
    CHECK_THROWS_AS(FbmSampler(0.75, odd, co2), NumericalError);
}

TEST_CASE("bm: terminal variance, independent increments, quadratic variation") {
    Grid g(1.0, 1, 10);
    int m = 10000;
    double vT = 0.0, corr = 0.0, qv_mean = 0.0, qv_var = 0.0;
    std::vector<double> qvs(m);
    for (int i = 0; i < m; ++i) {
        RngStream rng(4242, static_cast<std::uint64_t>(i));
        DriverPath p = sample_bm(g, rng, 1);
        vT += p.at(g.intervals(), 0) * p.at(g.intervals(), 0);
        double inc1 = p.at(256, 0) - p.at(0, 0);
        double inc2 = p.at(768, 0) - p.at(512, 0);
        corr += inc1 * inc2;
        double qv = 0.0;
        for (int k = 0; k < g.intervals(); ++k) {
            double d = p.at(k + 1, 0) - p.at(k, 0);
            qv += d * d;
        }
        qvs[i] = qv;
        qv_mean += qv;
    }
    vT /= m;
    corr /= (m * 0.25);
    qv_mean /= m;
    for (int i = 0; i < m; ++i) qv_var += (qvs[i] - qv_mean) * (qvs[i] - qv_mean);
    qv_var /= m;
    CHECK(std::abs(vT - 1.0) <= 3.0 * std::sqrt(2.0 / m));
    CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(m)));
    double se = std::sqrt(2.0 / (g.intervals() * static_cast<double>(m)));
    CHECK(std::abs(qv_mean - 1.0) <= 3.0 * se);
    CHECK(qv_var == doctest::Approx(2.0 / g.intervals()).epsilon(0.15));
}

TEST_CASE("deterministic drivers: linear, sine, power") {
    Grid g(1.0, 256, 0);
    DriverPath lin = deterministic_driver("linear", {1.0}, g);
    CHECK(holder_seminorm(lin, 0.75) == doctest::Approx(1.0).epsilon(1e-12));

    DriverPath sin1 = deterministic_driver("sine", {2.0, 3.0}, g);
    CHECK(sin1.at(64, 0) == doctest::Approx(2.0 * std::sin(3.0 * 0.25)).epsilon(1e-14));

    // power a = 0.75 on N = 2^8: seminorm at beta = 0.75 is 1, attained at
    // s = 0 since t^a - s^a <= (t-s)^a
    Grid g8(1.0, 1, 8);
    DriverPath pow75 = deterministic_driver("power", {1.0, 0.75}, g8);
    double brute = 0.0;
    for (int i = 0; i < g8.nodes(); ++i)
        for (int j = i + 1; j < g8.nodes(); ++j)
            brute = std::max(brute, std::abs(pow75.at(j, 0) - pow75.at(i, 0)) /
                                        std::pow(g8.node(j) - g8.node(i), 0.75));
    CHECK(brute == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(holder_seminorm(pow75, 0.75) == doctest::Approx(brute).epsilon(1e-13));

    CHECK_THROWS_AS(deterministic_driver("cubic", {}, g), ConfigError);
    CHECK_THROWS_AS(deterministic_driver("power", {1.0, 0.3}, g), ConfigError);
}

TEST_CASE("fbm holder seminorm stays bounded under refinement") {
    // growth of |deta|_{H-0.1} per level recorded and kept below 2
    double prev = 0.0;
    for (int lev = 6; lev <= 12; ++lev) {
        Grid g(1.0, 1, lev);
        FbmOptions opt;
        opt.circulant = true;
        opt.cholesky_cap = 256;
        FbmSampler sampler(0.75, g, opt);
        RngStream rng(8080, 1);
        DriverPath p = sampler.sample(rng, 1);
        double h = holder_seminorm(p, 0.65);
        if (prev > 0.0) CHECK(h / prev < 2.0);
        prev = h;
    }
}
