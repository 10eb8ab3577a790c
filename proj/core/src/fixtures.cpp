#include "sprony/fixtures.hpp"

#include "sprony/error.hpp"

namespace sprony
{

namespace
{

SectorSpec simple_sector(SectorIndex id, std::vector<Real> eigenvalues, const Real& gauge)
{
    SectorSpec s;
    s.id             = id;
    s.multiplicities = std::vector<int>(eigenvalues.size(), 1);
    s.eigenvalues    = std::move(eigenvalues);
    s.gauge          = gauge;
    return s;
}

SectorState state(SectorIndex sector, const std::vector<Real>& xi)
{
    SectorState st;
    st.sector = sector;
    for (std::size_t n = 0; n < xi.size(); ++n)
    {
        st.coefficients[n] = {Complex(xi[n])};
    }
    return st;
}

ObservationFunctional unit_atoms(std::size_t count)
{
    return observation_from_atoms(std::vector<Complex>(count, Complex(1)));
}

} // namespace

Fixture fixture_ex5()
{
    const Real tau2 = sqrt(Real(2));
    std::vector<Real> a, b;
    for (int n = 1; n <= 4; ++n)
    {
        a.push_back(Real(n));
        b.push_back(Real(n) / tau2);
    }
    Fixture f;
    f.name        = "ex5";
    f.description = "two lifetime sectors, tau = (1, sqrt 2), rates 1/sqrt2, 1, sqrt2, 2";
    f.spec.network =
        build_canonical_cocycle({simple_sector(0, a, Real(1)), simple_sector(1, b, tau2)});
    f.spec.states      = {state(0, {Real(1), Real(6) / 10}), state(1, {Real(8) / 10, Real(4) / 10})};
    f.spec.observation = unit_atoms(4);
    f.h                = Real(1) / 10;
    f.L                = 4;
    return f;
}

Fixture fixture_ex6(const Real& x0)
{
    const DirichletSector unit = dirichlet_sector(Real(1), 3, x0, 0);
    // the observation point only matters on the reference sector
    const Real root3           = sqrt(Real(3));
    const DirichletSector wide = dirichlet_sector(root3, 3, x0 * root3, 1);

    SectorSpec s0 = unit.sector, s1 = wide.sector;
    s0.gauge      = Real(1);
    s1.gauge      = Real(3);

    Fixture f;
    f.name        = "ex6";
    f.description = "Dirichlet Laplacians on (0,1) and (0,sqrt 3), gauges (1, 3)";
    f.spec.network     = build_canonical_cocycle({s0, s1});
    f.spec.states      = {state(0, {Real(1), Real(1) / 2}), state(1, {Real(1)})};
    f.spec.observation = observation_from_atoms(unit.atoms);
    f.h                = Real(1) / 20;
    f.L                = 3;
    return f;
}

Fixture fixture_example1()
{
    Fixture f;
    f.name        = "example1";
    f.description = "diag(1,3) and diag(2,6) with K = I";
    f.spec.network = build_canonical_cocycle(
        {simple_sector(0, {Real(1), Real(3)}, Real(1)),
         simple_sector(1, {Real(2), Real(6)}, Real(1) / 2)});
    f.spec.states      = {state(0, {Real(1), Real(1) / 2}), state(1, {Real(8) / 10, Real(4) / 10})};
    f.spec.observation = unit_atoms(2);
    f.h                = Real(1) / 10;
    f.L                = 4;
    return f;
}

Fixture fixture_example3()
{
    Fixture f;
    f.name        = "example3";
    f.description = "two sectors sharing rate 1, coefficients 0.7 and 0.5";
    f.spec.network = build_canonical_cocycle(
        {simple_sector(0, {Real(1), Real(2)}, Real(1)),
         simple_sector(1, {Real(1), Real(2)}, Real(1))});
    f.spec.states      = {state(0, {Real(7) / 10}), state(1, {Real(5) / 10})};
    f.spec.observation = unit_atoms(2);
    f.h                = Real(1) / 10;
    f.L                = 1;
    return f;
}

Fixture fixture_example4(const Real& gap)
{
    if (!(gap > 0))
    {
        throw Error(ErrorKind::InvalidArgument, "rate gap must be > 0");
    }
    Fixture f;
    f.name         = "example4";
    f.description  = "one sector, rates 1 and 1 + gap, unit amplitudes";
    f.spec.network = build_canonical_cocycle({simple_sector(0, {Real(1), 1 + gap}, Real(1))});
    f.spec.states      = {state(0, {Real(1), Real(1)})};
    f.spec.observation = unit_atoms(2);
    f.h                = Real(1) / 10;
    f.L                = 2;
    return f;
}

Fixture fixture_by_name(const std::string& name)
{
    if (name == "ex5")
    {
        return fixture_ex5();
    }
    if (name == "ex6")
    {
        return fixture_ex6();
    }
    if (name == "example1")
    {
        return fixture_example1();
    }
    if (name == "example3")
    {
        return fixture_example3();
    }
    if (name == "example4")
    {
        return fixture_example4();
    }
    throw Error(ErrorKind::InvalidArgument, "unknown fixture \"" + name + "\"");
}

std::vector<std::string> fixture_names()
{
    return {"ex5", "ex6", "example1", "example3", "example4"};
}

ScalingFamily example1_scaling()
{
    return ScalingFamily::from_gauges({Real(1), Real(1) / 2});
}

ScalingFamily perturbed_example1_scaling(const Real& factor)
{
    ScalingFamily f = example1_scaling();
    f.lambda(0, 1) *= factor;
    return f;
}

} // namespace sprony
