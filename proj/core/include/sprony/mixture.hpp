#ifndef SPRONY_MIXTURE_HPP
#define SPRONY_MIXTURE_HPP

//
// Forward model: the mixture observable
//
//   M(t) = sum_i w_i B_0 K_{0i} S_i(t) psi_i
//
// expanded over active eigenmodes, collapsed to a finite exponential sum,
// sampled on a uniform grid, and optionally perturbed by bounded noise.
//

#include <cstdint>
#include <vector>

#include "sprony/network.hpp"
#include "sprony/types.hpp"

namespace sprony
{

struct MixtureSpec
{
    CocycleNetwork network;
    SectorIndex reference = 0;
    std::vector<SectorState> states;
    ObservationFunctional observation;
};

std::vector<std::string> validate_mixture(const MixtureSpec& spec,
                                          const Tolerances& tol = {});

/// One active mode of one sector with its observation atom.
struct ModalTerm
{
    SectorIndex sector = 0;
    std::size_t index  = 0;
    Real alpha;
    std::vector<Complex> xi;    ///< eigen-coefficients of psi_i
    std::vector<Complex> atoms; ///< B_0 K_{0i} applied to each basis vector
    Real weight;                ///< w_i
    Complex coefficient;        ///< w_i * sum_b atoms_b xi_b

    /// Scalar atom of a simple eigenvalue.
    Complex atom() const { return atoms.empty() ? Complex(0) : atoms.front(); }
};

/// Expands the observable over every supported mode (zero coefficient
/// vectors contribute nothing).
std::vector<ModalTerm> modal_atoms(const MixtureSpec& spec,
                                   const Tolerances& tol = {});

/// B_0 K_{0i} phi_{i,n} for a simple eigenvalue n of sector i.
Complex channel_atom(const MixtureSpec& spec, SectorIndex sector, std::size_t index);

/// Weight w_i of the state attached to a sector; InvalidArgument if none.
Real sector_weight(const MixtureSpec& spec, SectorIndex sector);

/// Merges equal rates (within tol.eig), drops amplitudes at or below
/// tol.amp, sorts by rate. A merged term keeps its tag only if every
/// contributor carries the same tag.
ExponentialModel merge_terms(const ExponentialModel& model,
                             const Tolerances& tol = {});

/// Finite exponential model of the mixture, tags attached.
ExponentialModel collapse(const MixtureSpec& spec, const Tolerances& tol = {});

Complex evaluate(const ExponentialModel& model, const Real& t);

SampleWindow sample_uniform(const ExponentialModel& model, const Real& h,
                            std::size_t count);

/// Adds a seeded perturbation of exact l2 norm epsilon. The direction is an
/// isotropic Gaussian draw, real-valued when the window is real.
SampleWindow add_noise(const SampleWindow& window, const Real& epsilon,
                       std::uint64_t seed);

struct DirichletSector
{
    SectorSpec sector;
    std::vector<Complex> atoms; ///< point evaluations of the eigenfunctions
};

/// Dirichlet Laplacian on (0, length): eigenvalues (n pi / length)^2 and
/// point atoms sqrt(2/length) sin(n pi x0 / length), n = 1..mode_count.
DirichletSector dirichlet_sector(const Real& length, std::size_t mode_count,
                                 const Real& observation_point,
                                 SectorIndex id = 0);

/// Simple-eigenvalue observation functional from a list of atoms.
ObservationFunctional observation_from_atoms(const std::vector<Complex>& atoms);

} // namespace sprony

#endif // SPRONY_MIXTURE_HPP
