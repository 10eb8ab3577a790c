#ifndef SPRONY_NETWORK_HPP
#define SPRONY_NETWORK_HPP

//
// Cocycle and gauge algebra of a time-scaled intertwining network, plus the
// spectral rigidity checks and the canonical (unitary) intertwiner
// construction. Everything operates on finite active eigendata.
//

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sprony/types.hpp"

namespace sprony
{

/// lambda(i, j) is the time-scaling of the transfer from sector j to i.
struct ScalingFamily
{
    RealMatrix lambda;

    std::size_t size() const { return static_cast<std::size_t>(lambda.rows()); }
    Real operator()(SectorIndex i, SectorIndex j) const
    {
        return lambda(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    /// Coboundary family lambda_ij = tau_i / tau_j.
    static ScalingFamily from_gauges(const std::vector<Real>& tau);
};

std::vector<std::string> validate_scaling(const ScalingFamily& family,
                                          const Tolerances& tol = {});

struct TripleResidual
{
    SectorIndex i = 0, j = 0, k = 0;
    Real residual;
};

/// Worst relative violation of lambda_ik = lambda_ij lambda_jk.
TripleResidual worst_multiplicativity(const ScalingFamily& family);

/// Gauges normalized by tau_i = lambda(i, reference). Throws
/// MultiplicativityViolation (naming the worst triple) when the family is not
/// multiplicative within tol.cocycle.
std::vector<Real> recover_gauges(const ScalingFamily& family,
                                 SectorIndex reference,
                                 const Tolerances& tol = {});

/// |prod_r lambda(i_{r+1}, i_r) - 1| along a closed cycle.
Real check_cycle_consistency(const ScalingFamily& family,
                             const std::vector<SectorIndex>& cycle);

struct PairSpectralMatch
{
    SectorIndex i = 0, j = 0;
    bool pass = true;
    Real max_mismatch; ///< largest |tau_i a - tau_j b| among aligned pairs
    std::string reason;
};

struct IsospectralReport
{
    bool pass = true;
    std::vector<PairSpectralMatch> pairs;
};

/// Compares the rescaled spectra {tau_i alpha} pairwise, including aligned
/// multiplicities. Every sector must carry a gauge.
IsospectralReport check_isospectral(const std::vector<SectorSpec>& sectors,
                                    const Tolerances& tol = {});

/// Transfer maps keyed by (to, from).
struct CocycleNetwork
{
    std::vector<SectorSpec> sectors;
    std::map<std::pair<SectorIndex, SectorIndex>, TransferMap> transfers;

    const TransferMap& transfer(SectorIndex to, SectorIndex from) const;
    std::size_t size() const { return sectors.size(); }
};

/// Checks completeness and block shapes of every transfer.
std::vector<std::string> validate_network(const CocycleNetwork& net,
                                          const Tolerances& tol = {});

/// Unitary V_{i,alpha} : E_{0,alpha} -> E_{i,alpha}, keyed by
/// (sector, eigenvalue index within that sector).
using UnitaryChoices = std::map<std::pair<SectorIndex, std::size_t>, ComplexMatrix>;

/// K_ij := sum over alpha of V_{i,alpha} V_{j,alpha}^{-1}. Omitted unitaries
/// default to the identity. Throws SpectralMismatch when the sectors are not
/// isospectral after rescaling.
CocycleNetwork build_canonical_cocycle(const std::vector<SectorSpec>& sectors,
                                       const UnitaryChoices& unitaries = {},
                                       const Tolerances& tol = {});

/// Scaling factors read off the network's gauges (lambda_ij = tau_i/tau_j).
ScalingFamily scaling_from_gauges(const CocycleNetwork& net);

struct CocycleVerification
{
    Real max_residual;
    std::vector<TripleResidual> triples;
};

/// Block-wise operator-norm residual of K_ik = K_ij K_jk over all triples.
CocycleVerification verify_cocycle(const CocycleNetwork& net);

struct PairResidual
{
    SectorIndex to = 0, from = 0;
    Real residual;
};

struct IntertwiningVerification
{
    Real max_residual;
    std::vector<PairResidual> pairs;
};

/// Residual of K_ij S_j(t) phi = S_i(lambda_ij t) K_ij phi over every active
/// eigenvector phi of every source sector and every t in the grid. The
/// semigroups act spectrally; lambda comes from the gauges.
IntertwiningVerification verify_intertwining(const CocycleNetwork& net,
                                             const std::vector<Real>& t_grid);

/// Residual of K_ij A_j = lambda_ij A_i K_ij on the active eigenvectors,
/// relative to the largest eigenvalue involved.
IntertwiningVerification verify_generator_identity(const CocycleNetwork& net);

/// max over pairs of ||K_ij K_ji - I|| restricted to the active eigenspaces.
Real inverse_residual(const CocycleNetwork& net);

struct TransportedMode
{
    std::size_t target_index = 0;
    Real eigenvalue; ///< alpha / lambda_ij
    ComplexVector coefficients;
};

/// Pushes an eigen-coefficient vector of E_{j,alpha} through K_ij.
TransportedMode transport_eigenvector(const TransferMap& map,
                                      const SectorSpec& source,
                                      const Real& alpha,
                                      const ComplexVector& coefficients,
                                      const Tolerances& tol = {});

TransportedMode transport_eigenvector(const TransferMap& map,
                                      const SectorSpec& source,
                                      std::size_t source_index,
                                      const ComplexVector& coefficients);

} // namespace sprony

#endif // SPRONY_NETWORK_HPP
