#ifndef SPRONY_TYPES_HPP
#define SPRONY_TYPES_HPP

//
// Domain value types shared by every module. Nothing here runs an algorithm
// beyond invariant checking; all types are plain immutable-by-convention
// values and safe to share across threads.
//

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sprony/numeric.hpp"

namespace sprony
{

using SectorIndex = std::size_t;

/// Numerical tolerances used across modules.
struct Tolerances
{
    Real eig       = Real(1e-10); ///< absolute, eigenvalue equality and merging
    Real cocycle   = Real(1e-9);  ///< relative, multiplicativity of lambda
    Real amp       = Real(1e-13); ///< amplitudes at or below are pruned
    Real rank      = Real(1e-28); ///< relative singular-value cutoff
    Real imag      = Real(1e-8);  ///< relative imaginary part accepted on nodes
    Real obs       = Real(1e-12); ///< observability scalar treated as zero
    Real near_unit = Real(1e-12); ///< nodes above 1 - near_unit are rejected
    Real unitary   = Real(1e-10); ///< block unitarity check
};

/// Finite active eigendata of one sector's generator.
struct SectorSpec
{
    SectorIndex id = 0;
    std::vector<Real> eigenvalues; ///< strictly increasing, > 0
    std::vector<int> multiplicities;
    std::optional<Real> gauge; ///< tau_i

    std::size_t size() const { return eigenvalues.size(); }
    int multiplicity(std::size_t n) const { return multiplicities.at(n); }

    /// Index of the eigenvalue equal to alpha within tol, if any.
    std::optional<std::size_t> find(const Real& alpha, const Real& tol) const;
};

/// Every violated invariant of a sector, one message per violation.
std::vector<std::string> validate_sector(const SectorSpec& spec);

/// Eigenvalues sorted ascending with multiplicities carried along
/// (stable, idempotent).
SectorSpec sorted(SectorSpec spec);

/// Initial state of one sector expanded in its eigenbasis. Coefficient
/// vectors have one entry per basis vector of the eigenspace.
struct SectorState
{
    SectorIndex sector = 0;
    std::map<std::size_t, std::vector<Complex>> coefficients;
    Real weight = Real(1);
};

std::vector<std::string> validate_state(const SectorState& state,
                                        const SectorSpec& spec);

/// One unitary block of a transfer map: eigenspace source_index of sector
/// `from` onto eigenspace target_index of sector `to`.
struct TransferBlock
{
    std::size_t source_index = 0;
    std::size_t target_index = 0;
    ComplexMatrix matrix; ///< dim E_{to,target} x dim E_{from,source}
};

/// Block-diagonal intertwiner K_{to,from}.
struct TransferMap
{
    SectorIndex from = 0;
    SectorIndex to   = 0;
    Real scaling     = Real(1); ///< lambda_{to,from}
    std::vector<TransferBlock> blocks;

    const TransferBlock* block_for_source(std::size_t source_index) const;
};

std::vector<std::string> validate_transfer(const TransferMap& map,
                                           const SectorSpec& source,
                                           const SectorSpec& target,
                                           const Tolerances& tol = {});

/// Scalar observation on the reference sector, given by its action on the
/// reference eigenbasis: (eigenvalue index, basis index) -> value.
struct ObservationFunctional
{
    std::map<std::pair<std::size_t, std::size_t>, Complex> atoms;

    Complex atom(std::size_t n, std::size_t basis = 0) const;
};

/// Sector/eigenvalue attribution of one exponential term.
struct SectorTag
{
    SectorIndex sector = 0;
    std::size_t index  = 0; ///< eigenvalue index within the sector
    Real alpha;
};

struct ExponentialTerm
{
    Real rate;
    Complex amplitude;
    std::optional<SectorTag> tag;
};

/// Finite sum  M(t) = sum_l a_l exp(-mu_l t).
struct ExponentialModel
{
    std::vector<ExponentialTerm> terms;

    std::size_t size() const { return terms.size(); }
    std::vector<Real> rates() const;
    std::vector<Complex> amplitudes() const;
};

std::vector<std::string> validate_model(const ExponentialModel& model,
                                        const Tolerances& tol = {});

/// Sorts terms by ascending rate.
ExponentialModel sorted(ExponentialModel model);

/// Uniform samples y_n = M(n h), possibly perturbed.
struct SampleWindow
{
    Real step;
    std::vector<Complex> values;
    Real noise_level = Real(0);
    std::optional<unsigned long long> seed;

    std::size_t size() const { return values.size(); }
};

std::vector<std::string> validate_window(const SampleWindow& window);

/// Conditioning and threshold constants of a reconstruction problem.
struct StabilityReport
{
    Real kappa_exp;
    Real kappa_upper_bound;
    Real gap;
    std::map<SectorIndex, Real> intra_gaps;
    Real epsilon0;
    std::map<std::pair<SectorIndex, std::size_t>, Real> observability_inverses;
    Real mu_max;
    Real C3;
    Real C_L;
};

} // namespace sprony

#endif // SPRONY_TYPES_HPP
