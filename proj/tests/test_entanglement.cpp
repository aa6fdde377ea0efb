#include <doctest.h>

#include "aq/entanglement.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace aq;

namespace {

// Gram matrix of normalized modes l = -n..n behind one aperture of width
// alpha centered at `center`: <psi_l|psi_k> = e^{i(k-l)center} sinc((k-l)alpha/2).
OverlapMatrix shifted_aperture_gram(int n, double alpha, double center) {
    const int d = 2 * n + 1;
    OverlapMatrix b;
    b.entries.resize(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            const int q = j - i;
            b.entries(i, j) = std::polar(1.0, q * center) * std::sin(q * alpha / 2) /
                              (q == 0 ? 1.0 : q * alpha / 2);
            if (q == 0) b.entries(i, j) = 1.0;
        }
        b.labels.push_back({OamIndex{i - n}, SlitIndex::from_integer(0)});
    }
    return b;
}

OverlapMatrix identity_gram(int d) {
    OverlapMatrix b;
    b.entries = CMatrix::Identity(d, d);
    b.labels.resize(static_cast<std::size_t>(d));
    return b;
}

OverlapMatrix ones_gram(int d) {
    OverlapMatrix b;
    b.entries = CMatrix::Ones(d, d);
    b.labels.resize(static_cast<std::size_t>(d));
    return b;
}

CVector random_weights(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> g;
    CVector c(d);
    for (int i = 0; i < d; ++i) c(i) = Complex(g(rng), g(rng));
    return c / c.norm();
}

// Literal quadruple sum, b real and symmetric so index order does not matter.
double brute_force_purity(const CVector& c, const RMatrix& b) {
    const int d = static_cast<int>(c.size());
    const int n = d / 2;
    auto at = [&](int l, int k) { return b(l + n, k + n); };
    auto cc = [&](int l) { return c(l + n); };
    Complex norm{0.0, 0.0};
    for (int l = -n; l <= n; ++l)
        for (int k = -n; k <= n; ++k) norm += std::conj(cc(l)) * cc(k) * at(l, k) * at(-l, -k);
    Complex sum{0.0, 0.0};
    for (int l = -n; l <= n; ++l)
        for (int k = -n; k <= n; ++k)
            for (int p = -n; p <= n; ++p)
                for (int q = -n; q <= n; ++q)
                    sum += std::conj(cc(l)) * cc(k) * std::conj(cc(p)) * cc(q) * at(-l, -k) * at(-p, -q) *
                           at(k, p) * at(l, q);
    return (sum / (norm * norm)).real();
}

// <psi|psi> for uniform weights behind a centered aperture, by a midpoint
// rule over the square of slit angles. Normalized modes are e^{il phi}/sqrt(alpha).
double quadrature_norm(int n, double alpha, int cells) {
    const int d = 2 * n + 1;
    const double h = alpha / cells;
    double total = 0.0;
    for (int a = 0; a < cells; ++a) {
        const double ps = -alpha / 2 + (a + 0.5) * h;
        for (int b = 0; b < cells; ++b) {
            const double pi = -alpha / 2 + (b + 0.5) * h;
            Complex amp{0.0, 0.0};
            for (int l = -n; l <= n; ++l) amp += std::polar(1.0, l * (ps - pi));
            total += std::norm(amp) / d / (alpha * alpha) * h * h;
        }
    }
    return total;
}

}  // namespace

TEST_CASE("normalization constant") {
    std::mt19937_64 rng(1);
    CHECK(normalization_constant(random_weights(rng, 5), identity_gram(5)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normalization_constant(uniform_weights(7), ones_gram(7)) == doctest::Approx(7.0).epsilon(1e-14));

    const double oracle = quadrature_norm(1, kPi, 2000);
    const double value = normalization_constant(uniform_weights(3), single_aperture_overlaps(1, kPi));
    CHECK(std::abs(value - oracle) < 1e-6);

    // b_{-l,-k} = conj(b_lk) for an off-center aperture; the result is still real
    const OverlapMatrix shifted = shifted_aperture_gram(2, 1.1, 0.8);
    CHECK(normalization_constant(random_weights(rng, 5), shifted) > 0.0);

    OverlapMatrix bad = identity_gram(3);
    bad.entries.setZero();
    CHECK_THROWS_AS(normalization_constant(uniform_weights(3), bad), NumericalDegeneracy);
    CHECK_THROWS_AS(normalization_constant(uniform_weights(3), identity_gram(5)), InvalidArgument);
}

TEST_CASE("reduced density matrix") {
    const CMatrix rho = reduced_density(uniform_weights(5), identity_gram(5));
    CHECK((rho - CMatrix::Identity(5, 5) / 5.0).cwiseAbs().maxCoeff() < 1e-15);

    const CMatrix one = reduced_density(uniform_weights(1), single_aperture_overlaps(0, 0.3));
    REQUIRE(one.rows() == 1);
    CHECK(std::abs(one(0, 0) - 1.0) < 1e-15);

    const OverlapMatrix b = single_aperture_overlaps(1, kPi);
    const Complex tr = physical_trace(reduced_density(uniform_weights(3), b), b);
    CHECK(std::abs(tr - 1.0) < 1e-9);

    std::mt19937_64 rng(2);
    const OverlapMatrix shifted = shifted_aperture_gram(3, 2.2, -1.3);
    const CMatrix r = reduced_density(random_weights(rng, 7), shifted);
    CHECK((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(std::abs(physical_trace(r, shifted) - 1.0) < 1e-12);
}

TEST_CASE("purity by the quadruple sum") {
    CHECK(purity(uniform_weights(5), identity_gram(5)) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(purity(uniform_weights(5), ones_gram(5)) == doctest::Approx(1.0).epsilon(1e-14));

    const OverlapMatrix b = single_aperture_overlaps(1, kPi);
    const double oracle = brute_force_purity(uniform_weights(3), b.entries.real());
    CHECK(std::abs(purity(uniform_weights(3), b) - oracle) < 1e-14);

    std::mt19937_64 rng(5);
    for (double alpha : {0.3, 2.0, 4.4}) {
        const OverlapMatrix g = single_aperture_overlaps(2, alpha);
        const CVector real_c = random_weights(rng, 5).real().cast<Complex>();
        const CVector c = real_c / real_c.norm();
        CHECK(std::abs(purity(c, g) - brute_force_purity(c, g.entries.real())) < 1e-12);
    }
}

TEST_CASE("purity agrees with the Schmidt route for complex overlaps") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 4;
        const double alpha = 0.1 + (kTwoPi - 0.1) * unit(rng);
        const OverlapMatrix b = shifted_aperture_gram(n, alpha, kTwoPi * unit(rng) - kPi);
        const CVector c = random_weights(rng, 2 * n + 1);
        const double p = purity(c, b);
        const EntanglementReport r = schmidt_oracle(oam_biphoton(c), b, b);
        CHECK(std::abs(p - r.purity) < 1e-9);
        CHECK(p > 0.0);
        CHECK(p <= 1.0 + 1e-9);
    }
}

TEST_CASE("global phase does not change the purity") {
    std::mt19937_64 rng(4);
    const OverlapMatrix b = shifted_aperture_gram(2, 1.7, 0.4);
    const CVector c = random_weights(rng, 5);
    const double p = purity(c, b);
    for (double theta : {0.3, 1.9, -2.6}) {
        CHECK(std::abs(purity(c * std::polar(1.0, theta), b) - p) < 1e-14);
    }
}

TEST_CASE("symmetric purity") {
    CHECK(purity_symmetric(identity_gram(7)) == doctest::Approx(1.0 / 7).epsilon(1e-14));
    const double full = purity_symmetric(single_aperture_overlaps(1, kTwoPi));
    CHECK(full == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(concurrence(full) == doctest::Approx(std::sqrt(4.0 / 3)).epsilon(1e-9));
    for (int n = 1; n <= 4; ++n) {
        for (double alpha : {0.2, kPi, 5.9}) {
            const OverlapMatrix b = single_aperture_overlaps(n, alpha);
            CHECK(std::abs(purity_symmetric(b) - purity(uniform_weights(2 * n + 1), b)) < 1e-10);
        }
    }
    CHECK_THROWS_AS(purity_symmetric(shifted_aperture_gram(1, 1.0, 0.5)), InvalidArgument);
}

TEST_CASE("concurrence from purity") {
    CHECK(concurrence(1.0) == 0.0);
    CHECK(concurrence(1.0 + 5e-10) == 0.0);
    CHECK(concurrence(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(concurrence(1.0 / 3) == doctest::Approx(1.154700538).epsilon(1e-9));
    CHECK_THROWS_AS(concurrence(1.0 + 1e-8), InvalidArgument);
    CHECK_THROWS_AS(concurrence(-0.1), InvalidArgument);
    CHECK(normalized_concurrence(std::sqrt(4.0 / 3), 3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(normalized_concurrence(0.5, 1), InvalidArgument);
}

TEST_CASE("Schmidt oracle") {
    SUBCASE("Bell state") {
        BiphotonState s;
        s.coeffs = CMatrix::Identity(2, 2) / std::sqrt(2.0);
        const EntanglementReport r = schmidt_oracle(s, identity_gram(2), identity_gram(2));
        CHECK(r.concurrence == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.effective_rank() == 2);
        CHECK_FALSE(r.deflated);
    }
    SUBCASE("product state") {
        std::mt19937_64 rng(6);
        BiphotonState s;
        s.coeffs = random_weights(rng, 4) * random_weights(rng, 3).transpose();
        const EntanglementReport r = schmidt_oracle(s, identity_gram(4), identity_gram(3));
        CHECK(r.concurrence < 1e-7);
        CHECK(r.effective_rank() == 1);
    }
    SUBCASE("uniform D=3 behind a half aperture") {
        const OverlapMatrix b = single_aperture_overlaps(1, kPi);
        const EntanglementReport r = schmidt_oracle(oam_biphoton(uniform_weights(3)), b, b);
        CHECK(std::abs(r.concurrence - concurrence(purity(uniform_weights(3), b))) < 1e-9);
        double sum = 0.0;
        for (std::size_t i = 0; i < r.schmidt_spectrum.size(); ++i) {
            sum += r.schmidt_spectrum[i];
            if (i > 0) CHECK(r.schmidt_spectrum[i] <= r.schmidt_spectrum[i - 1]);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("singular Gram matrices are deflated") {
        const EntanglementReport r = schmidt_oracle(oam_biphoton(uniform_weights(3)), ones_gram(3), ones_gram(3));
        CHECK(r.deflated);
        CHECK(r.concurrence < 1e-7);
        CHECK(r.effective_rank() == 1);
    }
    SUBCASE("shape errors") {
        BiphotonState s;
        s.coeffs = CMatrix::Identity(2, 3);
        CHECK_THROWS_AS(schmidt_oracle(s, identity_gram(2), identity_gram(2)), InvalidArgument);
    }
}

TEST_CASE("concurrence stays within the rank bound") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = trial % 5;
        const int d = 2 * n + 1;
        const OverlapMatrix b = shifted_aperture_gram(n, 0.05 + 6.2 * unit(rng), unit(rng));
        const EntanglementReport r = schmidt_oracle(oam_biphoton(random_weights(rng, d)), b, b);
        CHECK(r.concurrence <= std::sqrt(2.0 * (d - 1) / d) + 1e-9);
        CHECK(r.concurrence >= 0.0);
    }
}

TEST_CASE("single-aperture family limits") {
    for (int n = 1; n <= 5; ++n) {
        const int d = 2 * n + 1;
        const OverlapMatrix full = single_aperture_overlaps(n, kTwoPi);
        CHECK(std::abs(concurrence(purity(uniform_weights(d), full)) - std::sqrt(2.0 * (d - 1) / d)) < 1e-6);
        const OverlapMatrix narrow = single_aperture_overlaps(n, 1e-4);
        CHECK(concurrence(purity(uniform_weights(d), narrow)) < 1e-3);
    }
}

TEST_CASE("concurrence grows with the aperture at small alpha") {
    for (int n = 1; n <= 6; ++n) {
        double previous = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double alpha = 1e-4 + (0.3 - 1e-4) * i / 49.0;
            const OverlapMatrix b = single_aperture_overlaps(n, alpha);
            const double c = schmidt_oracle(oam_biphoton(uniform_weights(2 * n + 1)), b, b).concurrence;
            CHECK(c >= previous - 1e-12);
            previous = c;
        }
    }
}

TEST_CASE("grid oracle") {
    SUBCASE("full aperture") {
        const EntanglementReport r = grid_oracle(oam_angular_state(uniform_weights(3), kTwoPi), 1 << 12);
        CHECK(std::abs(r.concurrence - std::sqrt(4.0 / 3)) < 1e-6);
        CHECK(r.converged);
    }
    SUBCASE("narrow aperture") {
        const EntanglementReport r = grid_oracle(oam_angular_state(uniform_weights(3), 1e-4), 1 << 12);
        CHECK(r.concurrence < 1e-3);
    }
    SUBCASE("half aperture, D=5, against the mode-space routes") {
        const OverlapMatrix b = single_aperture_overlaps(2, kPi);
        const double analytic = concurrence(purity(uniform_weights(5), b));
        const EntanglementReport r = grid_oracle(oam_angular_state(uniform_weights(5), kPi), 1 << 14);
        CHECK(std::abs(r.concurrence - analytic) < 1e-5);
        CHECK(r.converged);
    }
    SUBCASE("off-center aperture with random weights") {
        std::mt19937_64 rng(8);
        const CVector c = random_weights(rng, 7);
        const OverlapMatrix b = shifted_aperture_gram(3, 2.3, 1.1);
        const double analytic = schmidt_oracle(oam_biphoton(c), b, b).concurrence;
        const EntanglementReport r = grid_oracle(oam_angular_state(c, 2.3, 1.1), 1 << 14);
        CHECK(std::abs(r.concurrence - analytic) < 1e-5);
    }
    SUBCASE("grid size must be a large power of two") {
        const AngularBiphoton s = oam_angular_state(uniform_weights(3), 1.0);
        CHECK_THROWS_AS(grid_oracle(s, 1000), InvalidArgument);
        CHECK_THROWS_AS(grid_oracle(s, 1 << 10), InvalidArgument);
    }
}

TEST_CASE("weights and biphoton construction") {
    const CVector u = uniform_weights(5);
    CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(oam_biphoton(CVector::Ones(4)), InvalidArgument);
    const BiphotonState s = oam_biphoton(u);
    // the idler index runs over the same l range; l pairs with -l
    CHECK(std::abs(s.coeffs(0, 4) - u(0)) < 1e-15);
    CHECK(std::abs(s.coeffs(0, 0)) == 0.0);
    CHECK(std::abs(s.coeffs(2, 2) - u(2)) < 1e-15);
}
