#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "gcs/metric.hpp"
#include "gcs/util.hpp"
#include "oracles.hpp"

using namespace gcs;

namespace {
constexpr double kSqrt2 = 1.4142135623730951;

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / double(n - 1);
    return v;
}
} // namespace

TEST_SUITE_BEGIN("metric");

TEST_CASE("catenoid example closed form") {
    // y=0: cosh(0)=1, direct substitution
    MetricSample s0 = eval_catenoid_example(0.0, 1.0, kSqrt2);
    CHECK(s0.E == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s0.G == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s0.K == doctest::Approx(-1.0).epsilon(1e-14));

    // frozen with an independent high-precision evaluator
    MetricSample s1 = eval_catenoid_example(-1.0, 1.0, kSqrt2);
    CHECK(s1.E == doctest::Approx(2.3810978455418157).epsilon(1e-14));
    CHECK(s1.K == doctest::Approx(-0.17637844761413467).epsilon(1e-14));
    CHECK(s1.gamma == doctest::Approx(0.41997434161402607).epsilon(1e-14));

    MetricSample s2 = eval_catenoid_example(-0.5, 1.0, 2.0);
    CHECK(s2.E == doctest::Approx(1.0833697667694995).epsilon(1e-14));
    CHECK(s2.K == doctest::Approx(-2.1777820198297651).epsilon(1e-14));

    CHECK_THROWS_AS(eval_catenoid_example(0.0, 1.0, 1.2), DomainError);
    CHECK_THROWS_AS(eval_catenoid_example(0.0, -1.0, kSqrt2), DomainError);
}

TEST_CASE("helicoid example closed form") {
    MetricSample s0 = eval_helicoid_example(0.0, 1.0);
    CHECK(s0.E == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s0.K == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(s0.B == doctest::Approx(1.0).epsilon(1e-15));

    MetricSample s1 = eval_helicoid_example(-1.0, 1.0);
    CHECK(s1.E == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(s1.K == doctest::Approx(-0.25).epsilon(1e-15));

    MetricSample s2 = eval_helicoid_example(-0.5, 2.0);
    CHECK(s2.E == doctest::Approx(4.25).epsilon(1e-15));
    CHECK(s2.K == doctest::Approx(-0.22145328719723183).epsilon(1e-14));

    CHECK_THROWS_AS(eval_helicoid_example(0.0, 0.0), DomainError);
}

TEST_CASE("gauss_curvature_fd against analytic curvature") {
    const int n = 1024;
    std::vector<double> ys = linspace(-1.0, 0.0, n), E(n), G(n);

    SUBCASE("helicoid") {
        for (int i = 0; i < n; ++i) {
            MetricSample s = eval_helicoid_example(ys[i], 1.0);
            E[i] = s.E;
            G[i] = s.G;
        }
        const double k = gauss_curvature_fd(E, G, ys[0], ys[1] - ys[0], -1.0 + 2 * (ys[1] - ys[0]));
        CHECK(k == doctest::Approx(eval_helicoid_example(-1.0 + 2 * (ys[1] - ys[0]), 1.0).K)
                       .epsilon(1e-6));
    }
    SUBCASE("flat metric gives zero") {
        std::vector<double> ones(n, 1.0);
        CHECK(gauss_curvature_fd(ones, ones, ys[0], ys[1] - ys[0], -0.5) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("catenoid") {
        for (int i = 0; i < n; ++i) {
            MetricSample s = eval_catenoid_example(ys[i], 1.0, kSqrt2);
            E[i] = s.E;
            G[i] = s.G;
        }
        const double yq = ys[n / 2];
        const double k = gauss_curvature_fd(E, G, ys[0], ys[1] - ys[0], yq);
        const double c4 = std::pow(std::cosh(yq), -4.0);
        CHECK(k == doctest::Approx(-c4).epsilon(1e-6));
    }
    SUBCASE("too few samples around the query") {
        CHECK_THROWS_AS(gauss_curvature_fd(E, G, ys[0], ys[1] - ys[0], 0.0), GridError);
        std::vector<double> tiny(3, 1.0);
        CHECK_THROWS_AS(gauss_curvature_fd(tiny, tiny, 0.0, 0.1, 0.1), GridError);
    }
}

TEST_CASE("gauss_curvature_fd h^4 convergence") {
    // coarse grids: finer ones sit on the eps/h^2 rounding floor of the
    // second-derivative stencil (~1e-10), far below the 1e-6 target
    double prev_err = 0;
    for (int n : {32, 64, 128}) {
        std::vector<double> ys = linspace(-1.0, 0.0, n), E(n), G(n);
        for (int i = 0; i < n; ++i) {
            MetricSample s = eval_catenoid_example(ys[i], 1.0, 2.0);
            E[i] = s.E;
            G[i] = s.G;
        }
        double err = 0;
        for (int i = 2; i < n - 2; ++i) {
            const double k = gauss_curvature_fd(E, G, ys[0], ys[1] - ys[0], ys[i]);
            MetricSample s = eval_catenoid_example(ys[i], 1.0, 2.0);
            err = std::max(err, std::abs(k - s.K) / std::abs(s.K));
        }
        if (prev_err > 0) CHECK(prev_err / err > 10.0); // ~16 for clean h^4
        prev_err = err;
    }
}

TEST_CASE("christoffels per-family values") {
    SUBCASE("helicoid c=1, y=-1") {
        MetricSpec spec = MetricSpec::helicoid(1.0, 2.0);
        MetricSample s = eval_helicoid_example(-1.0, 1.0);
        ChristoffelSet c = christoffels(s, spec);
        CHECK(c.g211 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(c.g112 == doctest::Approx(-0.5).epsilon(1e-14));
        // gamma'/gamma = a B'/B = 1 here
        CHECK(c.gt222 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(c.gt112 == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("flat metric: all zero") {
        MetricSample s;
        s.E = 1;
        s.Ey = 0;
        s.G = 1;
        s.gamma_ratio = 0;
        MetricSpec spec;
        spec.family = MetricFamily::Tabulated;
        ChristoffelSet c = christoffels(s, spec);
        CHECK(c.g111 == 0.0);
        CHECK(c.g211 == 0.0);
        CHECK(c.g112 == 0.0);
        CHECK(c.g212 == 0.0);
        CHECK(c.g122 == 0.0);
        CHECK(c.g222 == 0.0);
    }
    SUBCASE("catenoid beta=sqrt2, y=-1: G222 = tanh(y)") {
        MetricSpec spec = MetricSpec::catenoid(1.0, kSqrt2, 2.0);
        MetricSample s = eval_catenoid_example(-1.0, 1.0, kSqrt2);
        ChristoffelSet c = christoffels(s, spec);
        CHECK(c.g222 == doctest::Approx(-0.76159415595576489).epsilon(1e-14));
    }
    SUBCASE("E <= 0 rejected") {
        MetricSample s;
        s.E = -1;
        CHECK_THROWS_AS(christoffels(s, MetricSpec{}), DomainError);
    }
}

TEST_CASE("christoffels agree with the general finite-difference formulas") {
    MetricSpec cat = MetricSpec::catenoid(1.0, 2.0, 1.0);
    MetricSpec hel = MetricSpec::helicoid(1.5, 1.0);
    for (double y : {-0.9, -0.6, -0.3, -0.15}) {
        {
            ChristoffelSet got = christoffels(eval_catenoid_example(y, 1.0, 2.0), cat);
            ChristoffelSet ref = oracles::christoffels_fd(
                [](double t) { return eval_catenoid_example(t, 1.0, 2.0).E; },
                [](double t) { return eval_catenoid_example(t, 1.0, 2.0).G; }, y);
            CHECK(got.g111 == doctest::Approx(ref.g111).epsilon(1e-6));
            CHECK(got.g211 == doctest::Approx(ref.g211).epsilon(1e-6));
            CHECK(got.g112 == doctest::Approx(ref.g112).epsilon(1e-6));
            CHECK(got.g212 == doctest::Approx(ref.g212).epsilon(1e-6));
            CHECK(got.g122 == doctest::Approx(ref.g122).epsilon(1e-6));
            CHECK(got.g222 == doctest::Approx(ref.g222).epsilon(1e-6));
        }
        {
            ChristoffelSet got = christoffels(eval_helicoid_example(y, 1.5), hel);
            ChristoffelSet ref = oracles::christoffels_fd(
                [](double t) { return eval_helicoid_example(t, 1.5).E; },
                [](double) { return 1.0; }, y);
            CHECK(got.g211 == doctest::Approx(ref.g211).epsilon(1e-6));
            CHECK(got.g112 == doctest::Approx(ref.g112).epsilon(1e-6));
            CHECK(got.g222 == doctest::Approx(ref.g222).epsilon(1e-6));
            CHECK(got.g111 == doctest::Approx(ref.g111).epsilon(1e-6));
            CHECK(got.g122 == doctest::Approx(ref.g122).epsilon(1e-6));
            CHECK(got.g212 == doctest::Approx(ref.g212).epsilon(1e-6));
        }
    }
    // tabulated branch: same check against the interpolated table
    MetricTable table = generate_metric_ode(MetricSpec::helicoid(1.0, 1.0), 1.0, 0.0, 1.0 / 2048);
    table.spec.family = MetricFamily::Tabulated;
    for (double y : {-0.8, -0.45}) {
        ChristoffelSet got = christoffels(table.sample_at(y), table.spec);
        ChristoffelSet ref = oracles::christoffels_fd(
            [&](double t) { return table.sample_at(t).E; },
            [&](double t) { return table.sample_at(t).G; }, y);
        CHECK(got.g211 == doctest::Approx(ref.g211).epsilon(1e-6));
        CHECK(got.g112 == doctest::Approx(ref.g112).epsilon(1e-6));
        CHECK(got.g222 == doctest::Approx(ref.g222).epsilon(2e-6));
    }
}

TEST_CASE("generate_metric_ode reproduces the closed forms") {
    SUBCASE("helicoid: w'' = w^-3 gives E = 1 + y^2") {
        MetricTable t = generate_metric_ode(MetricSpec::helicoid(1.0, 1.0), 1.0, 0.0, 1.0 / 4096);
        double worst = 0;
        for (size_t i = 0; i < t.y.size(); ++i)
            worst = std::max(worst, std::abs(t.E[i] - (1 + t.y[i] * t.y[i])));
        CHECK(worst < 1e-6);
        // spot value at y = -0.5
        MetricSample s = t.sample_at(-0.5);
        CHECK(s.E == doctest::Approx(1.25).epsilon(1e-7));
    }
    SUBCASE("catenoid: E = cosh^2 y") {
        MetricTable t =
            generate_metric_ode(MetricSpec::catenoid(1.0, kSqrt2, 1.0), 0.0, 0.0, 1.0 / 4096);
        double worst = 0;
        for (size_t i = 0; i < t.y.size(); ++i) {
            const double ch = std::cosh(t.y[i]);
            worst = std::max(worst, std::abs(t.E[i] - ch * ch));
        }
        CHECK(worst < 1e-6);
        CHECK(t.sample_at(-0.5).E == doctest::Approx(std::cosh(0.5) * std::cosh(0.5)).epsilon(1e-7));
    }
    SUBCASE("k0 -> 0 limit with w'(0) = 0 gives constant E") {
        MetricSpec spec = MetricSpec::helicoid(1.0, 1.0);
        spec.k0 = 1e-14;
        MetricTable t = generate_metric_ode(spec, 1.0, 0.0, 1.0 / 512);
        for (double e : t.E) CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("E' < 0 at interior nodes for y < 0") {
        MetricTable t =
            generate_metric_ode(MetricSpec::catenoid(1.0, 2.0, 1.0), 0.0, 0.0, 1.0 / 1024);
        for (size_t i = 0; i + 1 < t.y.size(); ++i)
            if (t.y[i] < -1e-6) CHECK(t.Ey[i] < 0.0);
    }
    SUBCASE("w0' > 0 rejected") {
        CHECK_THROWS_AS(
            generate_metric_ode(MetricSpec::helicoid(1.0, 1.0), 1.0, 0.5, 1.0 / 512),
            DomainError);
    }
}

TEST_CASE("quadrature_profile") {
    SUBCASE("constant integrand: h(w) = C2 - (w - w_start)") {
        // helicoid S = C1 + (k0/(a+1)) w^{2a+2}: at k0 -> 0 the integrand is 1/sqrt(C1)
        MetricSpec spec = MetricSpec::helicoid(1.0, 1.0);
        spec.k0 = 1e-300;
        std::vector<double> w = linspace(1.0, 2.0, 33);
        QuadratureProfile prof = quadrature_profile(spec, 1.0, 0.25, w);
        for (size_t j = 0; j < w.size(); ++j)
            CHECK(prof.y[j] == doctest::Approx(0.25 - (w[j] - 1.0)).epsilon(1e-12));
    }
    SUBCASE("helicoid a=-2 matches w = sqrt(1+y^2)") {
        // w' = y/w so C1 = 1; start at y=-0.1 to stay off the w'(0)=0 endpoint
        MetricSpec spec = MetricSpec::helicoid(1.0, 1.0);
        auto wy = [](double y) { return std::sqrt(1 + y * y); };
        std::vector<double> w = linspace(wy(-0.1), wy(-1.0), 4097);
        QuadratureProfile prof = quadrature_profile(spec, 1.0, -0.1, w);
        // forward: tabulated h(w) against the analytic inverse y = -sqrt(w^2-1)
        for (size_t j = 0; j < w.size(); j += 512)
            CHECK(prof.y[j] == doctest::Approx(-std::sqrt(w[j] * w[j] - 1.0)).epsilon(1e-6));
        // inverse: w(h^-1(y)) via the Hermite inverse
        for (double y : {-0.3, -0.55, -0.8, -0.99})
            CHECK(prof.invert(y) == doctest::Approx(wy(y)).epsilon(1e-6));
    }
    SUBCASE("catenoid beta=sqrt2 against the generated table") {
        // w = ln E = 2 ln cosh y, w'^2 = 4 - 4 e^-w so C1 = 4
        MetricSpec spec = MetricSpec::catenoid(1.0, kSqrt2, 1.0);
        auto wy = [](double y) { return 2.0 * std::log(std::cosh(y)); };
        std::vector<double> w = linspace(wy(-0.1), wy(-1.0), 4097);
        QuadratureProfile prof = quadrature_profile(spec, 4.0, -0.1, w);
        MetricTable t = generate_metric_ode(spec, 0.0, 0.0, 1.0 / 4096);
        for (double y : {-0.35, -0.6, -0.95}) {
            const double winv = prof.invert(y);
            const double e_table = t.sample_at(y).E;
            CHECK(std::exp(winv) == doctest::Approx(e_table).epsilon(1e-5));
        }
    }
    SUBCASE("nonpositive integrand rejected") {
        MetricSpec spec = MetricSpec::helicoid(1.0, 1.0);
        std::vector<double> w = linspace(1.0, 2.0, 9);
        CHECK_THROWS_AS(quadrature_profile(spec, 0.5, 0.0, w), DomainError);
    }
}

TEST_CASE("metric table save/load round trip") {
    MetricTable t = generate_metric_ode(MetricSpec::helicoid(1.0, 1.0), 1.0, 0.0, 1.0 / 512);
    const std::string path = "test_metric_table.txt";
    t.save(path, {"unit test table"});
    MetricTable back = MetricTable::load(path);
    REQUIRE(back.y.size() == t.y.size());
    CHECK(back.spec.family == MetricFamily::HelicoidType);
    CHECK(back.spec.a == doctest::Approx(-2.0));
    for (size_t i = 0; i < t.y.size(); i += 37) {
        CHECK(back.E[i] == t.E[i]); // full-precision columns survive the round trip
        CHECK(back.Ey[i] == t.Ey[i]);
    }
    std::remove(path.c_str());
}

TEST_CASE("gamma relations on sampled metrics") {
    // gamma = sqrt(-K) and 2 gamma'/gamma = K'/K
    for (double y : {-0.85, -0.4, -0.2}) {
        MetricSample s = eval_catenoid_example(y, 1.0, 2.0);
        CHECK(s.gamma == doctest::Approx(std::sqrt(-s.K)).epsilon(1e-14));
        const double h = 1e-6;
        MetricSample sp = eval_catenoid_example(y + h, 1.0, 2.0);
        MetricSample sm = eval_catenoid_example(y - h, 1.0, 2.0);
        const double kratio = (sp.K - sm.K) / (2 * h) / s.K;
        CHECK(2 * s.gamma_ratio == doctest::Approx(kratio).epsilon(1e-6));
    }
}

TEST_SUITE_END();
