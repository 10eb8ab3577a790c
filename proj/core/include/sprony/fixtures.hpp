#ifndef SPRONY_FIXTURES_HPP
#define SPRONY_FIXTURES_HPP

//
// Built-in reference setups. Eigenvalues are the closed forms evaluated at
// full precision, never rounded literals. Sector ids are 0-based.
//

#include <string>
#include <vector>

#include "sprony/mixture.hpp"
#include "sprony/network.hpp"

namespace sprony
{

struct Fixture
{
    std::string name;
    std::string description;
    MixtureSpec spec;
    Real h;               ///< suggested sampling step
    std::size_t L = 0;    ///< number of exponential terms in the observable
};

/// Two lifetime sectors, A_i = diag(n / tau_i), n = 1..4, tau = (1, sqrt 2),
/// K = I; states on modes 1 and 2 with unit atoms. Rates 1/sqrt2, 1, sqrt2, 2.
Fixture fixture_ex5();

/// Dirichlet Laplacians on (0, 1) and (0, sqrt 3), three modes each, gauges
/// (1, 3), point observation at x0 (0.3 by default) on the unit interval;
/// psi_0 = phi_1 + phi_2 / 2, psi_1 = phi_1.
Fixture fixture_ex6(const Real& x0 = Real(3) / 10);

/// diag(1, 3) and diag(2, 6) with K = I, so tau = (1, 1/2).
Fixture fixture_example1();

/// Two sectors sharing every eigenvalue, one-mode states at the common rate
/// with coefficients 0.7 and 0.5.
Fixture fixture_example3();

/// One sector with rates 1 and 1 + gap, unit amplitudes, h = 0.1.
Fixture fixture_example4(const Real& gap = Real(1) / 10);

/// Fixture by name: ex5, ex6, example1, example3, example4.
Fixture fixture_by_name(const std::string& name);
std::vector<std::string> fixture_names();

/// lambda = [[1, 2], [1/2, 1]].
ScalingFamily example1_scaling();

/// example1_scaling() with lambda(0, 1) multiplied by factor.
ScalingFamily perturbed_example1_scaling(const Real& factor);

} // namespace sprony

#endif // SPRONY_FIXTURES_HPP
