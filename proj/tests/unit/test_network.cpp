#include <functional>

#include "doctest.h"

#include "sprony/error.hpp"
#include "sprony/fixtures.hpp"
#include "sprony/network.hpp"
#include "support.hpp"

using namespace sprony;
using sprony::test::close;
using sprony::test::rel_close;

namespace
{

SectorSpec diag_sector(SectorIndex id, std::vector<Real> ev, std::optional<Real> gauge,
                       std::vector<int> mult = {})
{
    SectorSpec s;
    s.id             = id;
    s.multiplicities = mult.empty() ? std::vector<int>(ev.size(), 1) : mult;
    s.eigenvalues    = std::move(ev);
    s.gauge          = gauge;
    return s;
}

ErrorKind kind_of(const std::function<void()>& f)
{
    try
    {
        f();
    }
    catch (const Error& e)
    {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

} // namespace

TEST_SUITE("network")
{
    TEST_CASE("gauges of the two-sector diagonal family")
    {
        const ScalingFamily f = example1_scaling();
        CHECK(f(0, 1) == Real(2));
        CHECK(f(1, 0) == Real(1) / 2);
        const auto tau = recover_gauges(f, 0);
        CHECK(tau[0] == Real(1));
        CHECK(tau[1] == Real(1) / 2);
        CHECK(tau[0] / tau[1] == f(0, 1));
    }

    TEST_CASE("coboundary families give back their gauges")
    {
        test::Rng rng(11);
        for (int trial = 0; trial < 20; ++trial)
        {
            std::vector<Real> tau;
            for (int i = 0; i < 5; ++i)
                tau.push_back(rng.log_uniform(0.1, 10));
            const auto got = recover_gauges(ScalingFamily::from_gauges(tau), 2);
            for (std::size_t i = 0; i < tau.size(); ++i)
                CHECK(rel_close(got[i], tau[i] / tau[2], Real(1e-30)));
            CHECK(worst_multiplicativity(ScalingFamily::from_gauges(tau)).residual < Real(1e-30));
        }
    }

    TEST_CASE("non-multiplicative families are rejected with the worst triple")
    {
        const ScalingFamily f = perturbed_example1_scaling(Real(1) + Real(1e-3));
        const TripleResidual worst = worst_multiplicativity(f);
        CHECK(worst.residual > Real(9e-4));
        try
        {
            recover_gauges(f, 0);
            FAIL("expected MultiplicativityViolation");
        }
        catch (const Error& e)
        {
            CHECK(e.kind() == ErrorKind::MultiplicativityViolation);
            CHECK(e.detail().find("lambda(") != std::string::npos);
        }
        // below the tolerance the family is accepted
        CHECK_NOTHROW(recover_gauges(perturbed_example1_scaling(Real(1) + Real(1e-12)), 0));
    }

    TEST_CASE("scaling validation")
    {
        ScalingFamily f = example1_scaling();
        CHECK(validate_scaling(f).empty());
        f.lambda(0, 1) = Real(-2);
        CHECK_FALSE(validate_scaling(f).empty());
        CHECK(kind_of([&] { recover_gauges(f, 0); }) == ErrorKind::InvalidArgument);
        CHECK(kind_of([&] { recover_gauges(example1_scaling(), 5); }) ==
              ErrorKind::InvalidArgument);
        f = example1_scaling();
        f.lambda(1, 1) = Real(2);
        CHECK_FALSE(validate_scaling(f).empty());
    }

    TEST_CASE("cycle products")
    {
        const ScalingFamily f = example1_scaling();
        CHECK(check_cycle_consistency(f, {0, 1, 0}) == Real(0));
        CHECK(check_cycle_consistency(f, {1}) == Real(0));
        CHECK(close(check_cycle_consistency(perturbed_example1_scaling(Real(2)), {0, 1, 0}),
                    Real(1), Real(1e-30)));
        CHECK(kind_of([&] { check_cycle_consistency(f, {0, 1}); }) == ErrorKind::InvalidCycle);
        CHECK(kind_of([&] { check_cycle_consistency(f, {}); }) == ErrorKind::InvalidCycle);
        CHECK(kind_of([&] { check_cycle_consistency(f, {0, 3, 0}); }) ==
              ErrorKind::InvalidCycle);
    }

    TEST_CASE("rescaled spectra of the Dirichlet pair coincide")
    {
        const Fixture fx = fixture_ex6();
        const auto& s    = fx.spec.network.sectors;
        CHECK(check_isospectral(s).pass);
        for (std::size_t n = 0; n < 3; ++n)
            CHECK(close(*s[1].gauge * s[1].eigenvalues[n], s[0].eigenvalues[n], Real(1e-30)));
    }

    TEST_CASE("non-homothetic spectra fail the isospectral check")
    {
        auto a = diag_sector(0, {Real(1), Real(3)}, Real(1));
        auto b = diag_sector(1, {Real(2), Real(5)}, Real(1) / 2);
        const auto r = check_isospectral({a, b});
        CHECK_FALSE(r.pass);
        REQUIRE(r.pairs.size() == 1);
        CHECK(close(r.pairs[0].max_mismatch, Real(1) / 2, Real(1e-30)));

        b.eigenvalues = {Real(2), Real(6)};
        CHECK(check_isospectral({a, b}).pass);
        b.multiplicities = {1, 2};
        CHECK_FALSE(check_isospectral({a, b}).pass);
        b.gauge.reset();
        CHECK(kind_of([&] { check_isospectral({a, b}); }) == ErrorKind::InvalidArgument);
    }

    TEST_CASE("canonical cocycle on the Dirichlet pair")
    {
        const CocycleNetwork& net = fixture_ex6().spec.network;
        CHECK(validate_network(net).empty());
        const TransferMap& k01 = net.transfer(0, 1);
        CHECK(close(k01.scaling, Real(1) / 3, Real(1e-33)));
        for (std::size_t n = 0; n < 3; ++n)
        {
            const TransferBlock* b = k01.block_for_source(n);
            REQUIRE(b != nullptr);
            CHECK(b->target_index == n);
            CHECK(b->matrix(0, 0) == Complex(1));
        }
        CHECK(verify_cocycle(net).max_residual == Real(0));
        CHECK(verify_intertwining(net, {Real(0), Real(1) / 20, Real(1) / 10}).max_residual <=
              Real(1e-14));
        CHECK(verify_generator_identity(net).max_residual <= Real(1e-30));
        CHECK(inverse_residual(net) == Real(0));
    }

    TEST_CASE("canonical cocycle with multiplicity and random unitaries")
    {
        test::Rng rng(5);
        const std::vector<Real> base = {Real(1), Real(2.5), Real(4)};
        const std::vector<int> mult  = {1, 2, 3};
        std::vector<SectorSpec> sectors;
        const std::vector<Real> tau = {Real(1), Real(0.7), Real(1.9)};
        for (std::size_t i = 0; i < 3; ++i)
        {
            std::vector<Real> ev;
            for (const auto& a : base)
                ev.push_back(a / tau[i]);
            sectors.push_back(diag_sector(i, ev, tau[i], mult));
        }
        UnitaryChoices u;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t n = 0; n < 3; ++n)
                u[{i, n}] = rng.unitary(mult[n]);
        const CocycleNetwork net = build_canonical_cocycle(sectors, u);
        CHECK(validate_network(net).empty());
        CHECK(verify_cocycle(net).max_residual <= Real(1e-30));
        CHECK(verify_intertwining(net, {Real(0), Real(1), Real(3)}).max_residual <= Real(1e-30));
        CHECK(inverse_residual(net) <= Real(1e-30));

        // a non-unitary choice is refused
        u[{1, 1}] = Complex(2) * ComplexMatrix::Identity(2, 2);
        CHECK(kind_of([&] { build_canonical_cocycle(sectors, u); }) ==
              ErrorKind::InvalidArgument);
    }

    TEST_CASE("canonical construction refuses mismatched spectra")
    {
        CHECK(kind_of([] {
                  build_canonical_cocycle({diag_sector(0, {Real(1), Real(3)}, Real(1)),
                                           diag_sector(1, {Real(2), Real(5)}, Real(1) / 2)});
              }) == ErrorKind::SpectralMismatch);
    }

    TEST_CASE("a sign-flipped transfer breaks the cocycle identity")
    {
        CocycleNetwork net = build_canonical_cocycle(
            {diag_sector(0, {Real(1)}, Real(1)), diag_sector(1, {Real(1)}, Real(1))});
        net.transfers[{1, 0}].blocks[0].matrix(0, 0) = Complex(-1);
        CHECK(validate_network(net).empty());
        // K_00 = I but K_01 K_10 = -I
        CHECK(close(verify_cocycle(net).max_residual, Real(2), Real(1e-30)));
        CHECK(close(inverse_residual(net), Real(2), Real(1e-30)));
    }

    TEST_CASE("eigenvector transport")
    {
        const Fixture fx          = fixture_ex6();
        const CocycleNetwork& net = fx.spec.network;
        const SectorSpec& wide    = net.sectors[1];
        const TransportedMode m   = transport_eigenvector(
            net.transfer(0, 1), wide, pi() * pi() / 3, ComplexVector::Constant(1, Complex(1)));
        CHECK(m.target_index == 0);
        CHECK(close(m.eigenvalue, pi() * pi(), Real(1e-30)));
        CHECK(m.coefficients(0) == Complex(1));

        CHECK(kind_of([&] {
                  transport_eigenvector(net.transfer(0, 1), wide, Real(7),
                                        ComplexVector::Constant(1, Complex(1)));
              }) == ErrorKind::UnknownEigenvalue);
        CHECK(kind_of([&] {
                  transport_eigenvector(net.transfer(0, 1), wide, std::size_t(9),
                                        ComplexVector::Constant(1, Complex(1)));
              }) == ErrorKind::UnknownEigenvalue);
    }
}
