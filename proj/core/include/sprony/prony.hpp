#ifndef SPRONY_PRONY_HPP
#define SPRONY_PRONY_HPP

//
// Hankel-Prony inversion of a finite exponential sum.
//
// Given y_n = sum_{l=1}^{L} a_l z_l^n for n = 0..2L-1 with distinct nodes and
// nonzero amplitudes, the L x L Hankel matrix H = (y_{r+s}) = V D V^T is
// invertible and the monic polynomial
//
//   p(z) = z^L + c_{L-1} z^{L-1} + ... + c_0,  sum_k c_k y_{n+k} = -y_{n+L},
//
// has exactly the nodes as roots. Rates follow from mu_l = -log(z_l)/h and
// amplitudes from the (over-determined) Vandermonde system.
//

#include <vector>

#include "sprony/types.hpp"

namespace sprony
{

/// Prony nodes z_l = exp(-mu_l h) in (0, 1) and amplitudes.
struct PronyParameters
{
    std::vector<Real> nodes;
    std::vector<Complex> amplitudes;
    Real step = Real(1);

    std::size_t size() const { return nodes.size(); }

    static PronyParameters from_model(const ExponentialModel& model, const Real& h);
    ExponentialModel to_model() const;
};

std::vector<std::string> validate_parameters(const PronyParameters& params,
                                             const Tolerances& tol = {});

/// Exact samples sum_l a_l z_l^n, n = 0..count-1.
std::vector<Complex> prony_samples(const PronyParameters& params, std::size_t count);

/// Monic polynomial; coefficients c_0..c_{L-1}, leading 1 implicit.
struct PronyPolynomial
{
    std::vector<Complex> coefficients;

    std::size_t degree() const { return coefficients.size(); }
    Complex operator()(const Complex& z) const;
    Complex derivative(const Complex& z) const;
};

ComplexMatrix build_hankel(const std::vector<Complex>& values, std::size_t L);

PronyPolynomial prony_polynomial(const std::vector<Complex>& values, std::size_t L,
                                 const Tolerances& tol = {});

/// Companion-matrix eigenvalues followed by three Newton polishing steps.
std::vector<Complex> solve_nodes(const PronyPolynomial& poly);

/// mu = -log(z)/h. Throws NodeOutOfRange for complex nodes (beyond
/// tol.imag * max|z|) and for nodes outside (0, 1 - tol.near_unit).
std::vector<Real> nodes_to_rates(const std::vector<Complex>& nodes, const Real& h,
                                 const Tolerances& tol = {});

struct AmplitudeFit
{
    std::vector<Complex> amplitudes;
    Real condition;               ///< 2-norm condition of the Vandermonde matrix
    bool ill_conditioned = false; ///< condition above 1e12
};

/// Least squares on sum_l a_l z_l^n = values[n] over every available n.
AmplitudeFit solve_amplitudes(const std::vector<Complex>& nodes,
                              const std::vector<Complex>& values);

struct Reconstruction
{
    ExponentialModel model;   ///< ascending rates, untagged
    std::vector<Real> nodes;  ///< aligned with model.terms
    PronyPolynomial polynomial;
    Real vandermonde_condition;
    bool ill_conditioned = false;
};

/// Full pipeline on the first 2L samples for the polynomial, all samples for
/// the amplitudes. Errors carry the stage they surfaced from.
Reconstruction reconstruct_detailed(const SampleWindow& window, std::size_t L,
                                    const Tolerances& tol = {});

ExponentialModel reconstruct(const SampleWindow& window, std::size_t L,
                             const Tolerances& tol = {});

/// Same pipeline on moments m_n = sum_l a_l mu_l^n; the roots are the rates
/// themselves. Moments are rescaled internally so the roots are O(1).
ExponentialModel reconstruct_from_moments(const std::vector<Complex>& moments,
                                          std::size_t L, const Tolerances& tol = {});

/// Numerical rank of the L_max x L_max Hankel matrix at tol.rank.
std::size_t estimate_order(const SampleWindow& window, std::size_t L_max,
                           const Tolerances& tol = {});

} // namespace sprony

#endif // SPRONY_PRONY_HPP
