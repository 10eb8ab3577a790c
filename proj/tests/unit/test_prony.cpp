#include "doctest.h"

#include <algorithm>
#include <functional>

#include "sprony/error.hpp"
#include "sprony/fixtures.hpp"
#include "sprony/mixture.hpp"
#include "sprony/prony.hpp"
#include "support.hpp"

using namespace sprony;
using sprony::test::close;
using sprony::test::rel_close;

namespace
{

SampleWindow ex6_window(std::size_t count = 6)
{
    const Fixture fx = fixture_ex6();
    return sample_uniform(collapse(fx.spec), fx.h, count);
}

// Coefficients of prod_l (z - z_l), lowest degree first, by repeated
// multiplication; the leading 1 is dropped.
std::vector<Complex> expand_roots(const std::vector<Real>& roots)
{
    std::vector<Complex> c = {Complex(1)};
    for (const auto& r : roots)
    {
        std::vector<Complex> next(c.size() + 1, Complex(0));
        for (std::size_t k = 0; k < c.size(); ++k)
        {
            next[k + 1] += c[k];
            next[k] -= Complex(r) * c[k];
        }
        c = next;
    }
    c.pop_back();
    return c;
}

ErrorKind kind_of(const std::function<void()>& f, std::string* stage = nullptr)
{
    try
    {
        f();
    }
    catch (const Error& e)
    {
        if (stage)
            *stage = e.stage();
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST_SUITE("prony")
{
    TEST_CASE("Hankel matrix of the Dirichlet samples")
    {
        const ComplexMatrix H = build_hankel(ex6_window().values, 3);
        CHECK(close(H(0, 0).real(), Real(2.9610), Real(5e-4)));
        CHECK(close(H(0, 1).real(), Real(1.7625), Real(5e-4)));
        CHECK(close(H(0, 2).real(), Real(1.2624), Real(5e-4)));
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s)
                CHECK(H(r, s) == H(s, r));
        CHECK(kind_of([] { build_hankel(ex6_window().values, 4); }) ==
              ErrorKind::InsufficientSamples);
    }

    TEST_CASE("Hankel factorization H = V D V^T")
    {
        test::Rng rng(3);
        for (std::size_t L = 1; L <= 8; ++L)
        {
            const PronyParameters p = rng.parameters(L);
            const ComplexMatrix H   = build_hankel(prony_samples(p, 2 * L), L);
            ComplexMatrix V(L, L), D = ComplexMatrix::Zero(L, L);
            for (std::size_t r = 0; r < L; ++r)
                for (std::size_t l = 0; l < L; ++l)
                    V(r, l) = Complex(pow(p.nodes[l], Real(r)));
            for (std::size_t l = 0; l < L; ++l)
                D(l, l) = p.amplitudes[l];
            CHECK(spectral_norm(H - V * D * V.transpose()) <= Real(1e-30));
        }
    }

    TEST_CASE("polynomial coefficients are the elementary symmetric functions")
    {
        test::Rng rng(8);
        for (std::size_t L = 1; L <= 6; ++L)
        {
            const PronyParameters p     = rng.parameters(L, 0.02);
            const PronyPolynomial poly  = prony_polynomial(prony_samples(p, 2 * L), L);
            const std::vector<Complex> e = expand_roots(p.nodes);
            REQUIRE(poly.degree() == L);
            for (std::size_t k = 0; k < L; ++k)
                CHECK(close(poly.coefficients[k], e[k], Real(1e-20)));
            for (const auto& z : p.nodes)
                CHECK(magnitude(poly(Complex(z))) <= Real(1e-20));
        }
    }

    TEST_CASE("two nodes agree with the quadratic formula")
    {
        const std::vector<Real> y = {Real(3), Real(1.5), Real(0.9), Real(0.6)};
        // Cramer on [y0 y1; y1 y2] c = -[y2; y3], then roots of z^2 + c1 z + c0
        const Real det = y[0] * y[2] - y[1] * y[1];
        const Real c0  = (-y[2] * y[2] + y[1] * y[3]) / det;
        const Real c1  = (-y[0] * y[3] + y[1] * y[2]) / det;
        const Real disc = sqrt(c1 * c1 - 4 * c0);
        std::vector<Real> want = {(-c1 - disc) / 2, (-c1 + disc) / 2};

        std::vector<Complex> values;
        for (const auto& v : y)
            values.emplace_back(v);
        const PronyPolynomial poly = prony_polynomial(values, 2);
        CHECK(close(poly.coefficients[0], Complex(c0), Real(1e-30)));
        CHECK(close(poly.coefficients[1], Complex(c1), Real(1e-30)));
        std::vector<Complex> roots = solve_nodes(poly);
        std::sort(roots.begin(), roots.end(),
                  [](const Complex& a, const Complex& b) { return a.real() < b.real(); });
        CHECK(close(roots[0], Complex(want[0]), Real(1e-30)));
        CHECK(close(roots[1], Complex(want[1]), Real(1e-30)));
    }

    TEST_CASE("polynomial derivative")
    {
        PronyPolynomial p;
        p.coefficients = {Complex(2), Complex(-3), Complex(1)}; // z^3 + z^2 - 3z + 2
        CHECK(p(Complex(2)) == Complex(8));
        CHECK(p.derivative(Complex(2)) == Complex(13)); // 3z^2 + 2z - 3
    }

    TEST_CASE("nodes and rates of the Dirichlet window")
    {
        const Reconstruction r = reconstruct_detailed(ex6_window(), 3);
        const std::vector<Real> nodes = {Real(0.8482), Real(0.6107), Real(0.1389)};
        for (std::size_t l = 0; l < 3; ++l)
            CHECK(close(r.nodes[l], nodes[l], Real(1e-3)));
        const Real p2 = pi() * pi();
        CHECK(rel_close(r.model.terms[0].rate, p2 / 3, Real(1e-25)));
        CHECK(rel_close(r.model.terms[1].rate, p2, Real(1e-25)));
        CHECK(rel_close(r.model.terms[2].rate, 4 * p2, Real(1e-25)));
        CHECK(close(r.model.terms[0].amplitude.real(), Real(1.1441), Real(1e-3)));
        CHECK(close(r.model.terms[1].amplitude.real(), Real(1.1441), Real(1e-3)));
        CHECK(close(r.model.terms[2].amplitude.real(), Real(0.6728), Real(1e-3)));
        CHECK_FALSE(r.ill_conditioned);
    }

    TEST_CASE("node to rate conversion")
    {
        const auto mu = nodes_to_rates({Complex(Real(0.8482))}, Real(1) / 20);
        CHECK(close(mu[0], Real(3.293), Real(1e-3)));
        CHECK(close(mu[0], pi() * pi() / 3, Real(5e-3)));

        std::string stage;
        CHECK(kind_of([] { nodes_to_rates({Complex(Real(1.2))}, Real(1)); }) ==
              ErrorKind::NodeOutOfRange);
        CHECK(kind_of([] { nodes_to_rates({Complex(Real(-0.5))}, Real(1)); }) ==
              ErrorKind::NodeOutOfRange);
        CHECK(kind_of([] { nodes_to_rates({Complex(Real(0.5), Real(0.1))}, Real(1)); }) ==
              ErrorKind::NodeOutOfRange);
        CHECK(kind_of([] { nodes_to_rates({Complex(Real(1))}, Real(1)); }) ==
              ErrorKind::NodeOutOfRange);
    }

    TEST_CASE("growing exponential is refused at the rates stage")
    {
        SampleWindow w;
        w.step = Real(1);
        for (int n = 0; n < 2; ++n)
            w.values.emplace_back(pow(Real(2), Real(n)));
        std::string stage;
        CHECK(kind_of([&] { reconstruct(w, 1); }, &stage) == ErrorKind::NodeOutOfRange);
        CHECK(stage == "rates");
    }

    TEST_CASE("single exponential is recovered exactly")
    {
        ExponentialModel m;
        m.terms = {{Real(2), Complex(Real(3)), std::nullopt}};
        const ExponentialModel got = reconstruct(sample_uniform(m, Real(1) / 4, 2), 1);
        REQUIRE(got.size() == 1);
        CHECK(close(got.terms[0].rate, Real(2), Real(1e-32)));
        CHECK(close(got.terms[0].amplitude, Complex(3), Real(1e-32)));
    }

    TEST_CASE("four lifetimes from exact samples")
    {
        const Fixture fx = fixture_ex5();
        const ExponentialModel got =
            reconstruct(sample_uniform(collapse(fx.spec), fx.h, 8), 4);
        const std::vector<Real> want = {1 / sqrt(Real(2)), Real(1), sqrt(Real(2)), Real(2)};
        for (std::size_t l = 0; l < 4; ++l)
            CHECK(close(got.terms[l].rate, want[l], Real(1e-8)));
    }

    TEST_CASE("repeated rates make the Hankel matrix singular")
    {
        PronyParameters p;
        p.step       = Real(1);
        p.nodes      = {Real(0.5), Real(0.5), Real(0.3)};
        p.amplitudes = {Complex(1), Complex(2), Complex(1)};
        SampleWindow w;
        w.step   = Real(1);
        w.values = prony_samples(p, 6);
        std::string stage;
        CHECK(kind_of([&] { reconstruct(w, 3); }, &stage) == ErrorKind::RankDeficientHankel);
        CHECK(stage == "polynomial");

        CHECK(kind_of([&] { reconstruct(w, 4); }, &stage) == ErrorKind::InsufficientSamples);
        CHECK(stage == "input");
    }

    TEST_CASE("amplitude least squares over a longer window")
    {
        const SampleWindow w     = ex6_window(12);
        const ExponentialModel m = reconstruct(w, 3);
        const ExponentialModel t = collapse(fixture_ex6().spec);
        for (std::size_t l = 0; l < 3; ++l)
            CHECK(close(m.terms[l].amplitude, t.terms[l].amplitude, Real(1e-28)));

        const AmplitudeFit fit = solve_amplitudes({Complex(Real(0.5)), Complex(Real(0.5) + Real(1e-14))},
                                                  {Complex(1), Complex(1), Complex(1)});
        CHECK(fit.ill_conditioned);
        CHECK(kind_of([] { solve_amplitudes({Complex(Real(0.5)), Complex(Real(0.5))}, {Complex(1), Complex(1)}); }) ==
              ErrorKind::InvalidArgument);
    }

    TEST_CASE("moment route")
    {
        const ExponentialModel t = collapse(fixture_ex6().spec);
        std::vector<Complex> moments;
        for (std::size_t n = 0; n < 6; ++n)
        {
            Complex m(0);
            for (const auto& term : t.terms)
                m += term.amplitude * Complex(pow(term.rate, Real(n)));
            moments.push_back(m);
        }
        CHECK(close(moments[0].real(), Real(2.9610), Real(5e-4)));
        const ExponentialModel got = reconstruct_from_moments(moments, 3);
        for (std::size_t l = 0; l < 3; ++l)
        {
            CHECK(close(got.terms[l].rate, t.terms[l].rate, Real(1e-8)));
            CHECK(close(got.terms[l].amplitude, t.terms[l].amplitude, Real(1e-8)));
        }
    }

    TEST_CASE("order estimate from a padded window")
    {
        CHECK(estimate_order(ex6_window(8), 4) == 3);
        CHECK(estimate_order(ex6_window(6), 3) == 3);
    }

    TEST_CASE("complex amplitudes round trip")
    {
        test::Rng rng(21);
        for (int trial = 0; trial < 20; ++trial)
        {
            const std::size_t L     = rng.integer(1, 5);
            const PronyParameters p = rng.parameters(L, 0.01);
            SampleWindow w;
            w.step   = p.step;
            w.values = prony_samples(p, 2 * L);
            const Reconstruction r = reconstruct_detailed(w, L);
            std::vector<std::size_t> order(L);
            for (std::size_t l = 0; l < L; ++l)
                order[l] = l;
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return p.nodes[a] > p.nodes[b]; });
            for (std::size_t l = 0; l < L; ++l)
            {
                CHECK(close(r.nodes[l], p.nodes[order[l]], Real(1e-20)));
                CHECK(close(r.model.terms[l].amplitude, p.amplitudes[order[l]], Real(1e-18)));
            }
        }
    }
}
