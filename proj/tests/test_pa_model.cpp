#include <doctest.h>

#include "fdsic/pa_model.hpp"
#include "fdsic/rng.hpp"

using namespace fdsic;

namespace {

CVec random_samples(std::uint64_t seed, int n, double variance = 1.0) {
    RandomStream rng(seed);
    CVec x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.cscg(variance);
    return x;
}

}  // namespace

TEST_CASE("measured amplifier coefficients") {
    const auto pa = measured_pa();
    REQUIRE(pa.num_orders() == 2);
    CHECK(pa.psi1() == 35.89);
    CHECK(pa.psi3() == -2.24);
    CHECK(pa.highest_order() == 3);
    CHECK(apply_pa(CVec::Zero(3), pa).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("normalization") {
    const auto n = normalized(measured_pa());
    CHECK(n.psi1() == 1.0);
    CHECK(n.psi3() == doctest::Approx(-2.24 / 35.89).epsilon(1e-15));
    CHECK(n.psi3() == doctest::Approx(-0.0624129).epsilon(1e-5));
    CHECK(normalized(n).odd_coeffs == n.odd_coeffs);
    CHECK(normalized(normalized(measured_pa())).odd_coeffs == n.odd_coeffs);
    CHECK_THROWS_AS(normalized(HammersteinPa{{0.0, 1.0}}), ConfigError);
    CHECK_THROWS_AS(HammersteinPa{{}}.validate(), ConfigError);
}

TEST_CASE("polynomial evaluation") {
    CVec x(1);
    x[0] = 0.1;
    const CVec y = apply_pa(x, measured_pa());
    CHECK(y[0].real() == doctest::Approx(3.589 - 0.00224).epsilon(1e-14));
    CHECK(y[0].imag() == 0.0);

    const CVec r = random_samples(1, 64);
    CHECK((apply_pa(r, HammersteinPa{{2.5}}) - 2.5 * r).norm() < 1e-14);
    CHECK((apply_pa(r, HammersteinPa{{2.5, 0.0}}) - 2.5 * r).norm() < 1e-14);

    // Fifth order: psi5 |x|^4 x.
    const HammersteinPa p5{{1.0, -0.1, 0.01}};
    const CVec y5 = apply_pa(r, p5);
    for (int n = 0; n < 64; ++n) {
        const double a = std::norm(r[n]);
        CHECK(std::abs(y5[n] - (1.0 - 0.1 * a + 0.01 * a * a) * r[n]) < 1e-13);
    }
}

TEST_CASE("rotation equivariance") {
    const CVec x = random_samples(2, 256);
    const auto pa = measured_pa();
    for (double theta : {0.3, 1.0, -2.2, 3.1}) {
        const cplx rot = std::polar(1.0, theta);
        const CVec lhs = apply_pa(rot * x, pa);
        const CVec rhs = rot * apply_pa(x, pa);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("third-order component") {
    const auto pa = measured_pa();
    const CVec x = random_samples(3, 128);
    CHECK((apply_pa(x, pa) - pa.psi1() * x - third_order_component(x, pa)).cwiseAbs().maxCoeff() < 1e-12);

    const double alpha = 1.7;
    const double ratio = third_order_component(alpha * x, pa).squaredNorm() / third_order_component(x, pa).squaredNorm();
    CHECK(ratio == doctest::Approx(std::pow(alpha, 6)).epsilon(1e-12));

    CVec u(16);
    for (int n = 0; n < 16; ++n) u[n] = std::polar(1.0, 0.4 * n);
    CHECK((third_order_component(u, pa) - pa.psi3() * u).cwiseAbs().maxCoeff() < 1e-14);

    CHECK_THROWS_AS(third_order_component(x, ideal_pa()), PreconditionError);
}

TEST_CASE("third-order power grows 3 dB per dB of drive") {
    const auto pa = normalized(measured_pa());
    const CVec x = random_samples(4, 512);
    std::vector<double> in_db, out_db;
    for (int step = 0; step <= 10; ++step) {
        const double g = std::pow(10.0, step / 20.0);
        in_db.push_back(10 * std::log10((g * x).squaredNorm()));
        out_db.push_back(10 * std::log10(third_order_component(g * x, pa).squaredNorm()));
    }
    // Least-squares slope over the sweep and per step.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(in_db.size());
    for (size_t i = 0; i < in_db.size(); ++i) {
        sx += in_db[i];
        sy += out_db[i];
        sxx += in_db[i] * in_db[i];
        sxy += in_db[i] * out_db[i];
    }
    CHECK(std::abs((n * sxy - sx * sy) / (n * sxx - sx * sx) - 3.0) <= 0.01);
    for (size_t i = 1; i < in_db.size(); ++i)
        CHECK(std::abs((out_db[i] - out_db[i - 1]) / (in_db[i] - in_db[i - 1]) - 3.0) <= 0.01);
}
