#ifndef SPRONY_TAGGING_HPP
#define SPRONY_TAGGING_HPP

//
// Sector-aware post-processing of a reconstructed exponential model:
// spectral separation, unique sector/eigenvalue attribution, the active
// inter-sector gap and eigenspace-component recovery.
//

#include <optional>
#include <vector>

#include "sprony/mixture.hpp"
#include "sprony/types.hpp"

namespace sprony
{

struct SeparationCollision
{
    SectorIndex sector_a = 0, sector_b = 0;
    std::size_t index_a = 0, index_b = 0;
    Real rate;
};

struct SeparationReport
{
    bool pass = true;
    std::vector<SeparationCollision> collisions;
};

/// Pass iff no eigenvalue is shared (within tol.eig) by two sectors.
SeparationReport check_spectral_separation(const std::vector<SectorSpec>& sectors,
                                           const Tolerances& tol = {});

struct TaggedTerm
{
    Real rate_raw;
    Real rate_snapped; ///< the matched eigenvalue
    Complex amplitude;
    SectorIndex sector = 0;
    std::size_t index  = 0;
    Real alpha;
};

struct TaggedModel
{
    std::vector<TaggedTerm> terms;
    Real gap; ///< +inf when no competing sector exists
};

struct TagOptions
{
    /// Overrides the capture radius outright.
    std::optional<Real> capture_radius;
    /// A known inter-sector gap; the capture radius becomes gap/2.
    std::optional<Real> prior_gap;
    Tolerances tol;
};

/// Attributes every rate to the unique nearest active eigenvalue, provided
/// it stays within half the distance from that eigenvalue to any other
/// sector's spectrum. Throws AmbiguousTag on ties (or when two rates claim
/// one eigenvalue) and UnmatchedRate outside the capture radius. Without a
/// prior gap the radius is 10% of the local spacing inside the matched
/// sector.
TaggedModel tag_rates(const ExponentialModel& model,
                      const std::vector<SectorSpec>& sectors,
                      const TagOptions& options = {});

/// min over terms of the distance from the snapped rate to every other
/// sector's active spectrum; +inf with a single sector.
Real compute_gap(const TaggedModel& tagged, const std::vector<SectorSpec>& sectors);

/// Same quantity for a model carrying ground-truth tags (e.g. from collapse).
Real compute_gap(const ExponentialModel& tagged_model,
                 const std::vector<SectorSpec>& sectors);

struct EigencomponentEstimate
{
    SectorIndex sector = 0;
    std::size_t index  = 0;
    Real alpha;
    Complex coefficient;   ///< coordinate of P_{i,alpha} psi_i
    Complex observability; ///< T_{i,alpha} = w_i B_0 K_{0i} phi_{i,alpha}
};

/// coefficient = a / T for each tagged term. Throws ObservabilityFailure
/// when |T| <= tol.obs and NonSimpleEigenvalue for multiplicity > 1.
std::vector<EigencomponentEstimate> recover_eigencomponents(const TaggedModel& tagged,
                                                            const MixtureSpec& spec,
                                                            const Tolerances& tol = {});

} // namespace sprony

#endif // SPRONY_TAGGING_HPP
