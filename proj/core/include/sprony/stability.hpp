#ifndef SPRONY_STABILITY_HPP
#define SPRONY_STABILITY_HPP

//
// Local stability of the reconstruction: Jacobian of the Prony map
// F(z, a) = (sum_l a_l z_l^n)_{n<2L}, its inverse norm kappa_exp, the
// Vandermonde-type upper bound, the tagging threshold epsilon_0 and
// observability norms, plus an empirical noise-sweep harness.
//

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sprony/mixture.hpp"
#include "sprony/prony.hpp"
#include "sprony/tagging.hpp"
#include "sprony/types.hpp"

namespace sprony
{

struct StabilityConfig
{
    Real C2  = Real(1);
    Real C_L = Real(1);
    /// Lipschitz-type constant of the node-to-rate map; defaults to
    /// C2 * 2 / (h z_min) when unset.
    std::optional<Real> C3;

    Real resolve_C3(const PronyParameters& params) const;
};

/// 2L x 2L matrix [ n a_l z_l^{n-1} | z_l^n ], n = 0..2L-1.
ComplexMatrix prony_jacobian(const PronyParameters& params, const Tolerances& tol = {});

/// ||J^{-1}||_2 = 1 / sigma_min(J).
Real kappa_exp(const ComplexMatrix& jacobian, const Tolerances& tol = {});

struct KappaBound
{
    Real value;
    std::vector<Real> inter_factors; ///< |mu_l - mu_l'| across sectors
    std::vector<Real> intra_factors; ///< |mu_l - mu_l'| within one sector
    std::vector<Real> untagged_factors;
};

/// C_L exp(mu_max h P) / (h^P prod_{l<l'} |mu_l - mu_l'| min|a_l|),
/// P = L(L-1)/2. Gap factors are split by sector when tags are present.
KappaBound kappa_upper_bound(const ExponentialModel& model, const Real& h,
                             const Real& C_L);

/// gap / (2 C3 kappa); +inf for an infinite gap.
Real epsilon_threshold(const Real& gap, const Real& kappa, const Real& C3);

/// 1 / (w_i |B_0 K_{0i} phi_{i,alpha}|) per tagged (sector, eigenvalue index).
std::map<std::pair<SectorIndex, std::size_t>, Real>
observability_norms(const MixtureSpec& spec, const TaggedModel& tagged,
                    const Tolerances& tol = {});

/// min_{n != m} |alpha_n - alpha_m| within a sector; +inf for one eigenvalue.
Real intra_sector_gap(const SectorSpec& sector);

/// Every constant above, evaluated at the ground truth of a mixture.
StabilityReport stability_report(const MixtureSpec& spec, const Real& h,
                                 const StabilityConfig& config = {},
                                 const Tolerances& tol = {});

struct SweepRecord
{
    Real epsilon;
    std::size_t trials = 0;
    /// max of rate, amplitude and eigencomponent errors; +inf when the
    /// reconstruction failed or a tag changed.
    std::vector<Real> errors;
    std::vector<bool> tag_ok;
    std::vector<bool> recon_ok;
    std::size_t tag_failures   = 0;
    std::size_t recon_failures = 0;

    Real median_error() const;
};

/// For each epsilon and trial: perturb the 2L exact samples (seed + trial),
/// reconstruct, match terms by sorted rate, tag and recover components.
/// Failures are recorded per trial, never thrown.
std::vector<SweepRecord> noise_sweep(const MixtureSpec& spec, const Real& h,
                                     std::size_t L, const std::vector<Real>& epsilons,
                                     std::size_t trials, std::uint64_t seed,
                                     const Tolerances& tol = {});

/// Least-squares slope of log(median error) against log(epsilon), over
/// records with positive epsilon and finite median.
Real loglog_slope(const std::vector<SweepRecord>& records);

/// Largest epsilon whose trials all reconstructed successfully (0 if none).
Real empirical_locality(const std::vector<SweepRecord>& records);

} // namespace sprony

#endif // SPRONY_STABILITY_HPP
