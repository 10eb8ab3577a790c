#include "sprony/network.hpp"

#include <algorithm>
#include <sstream>

#include "sprony/error.hpp"

namespace sprony
{

namespace
{

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::vector<Real> gauges_of(const std::vector<SectorSpec>& sectors)
{
    std::vector<Real> tau;
    tau.reserve(sectors.size());
    for (const auto& s : sectors)
    {
        if (!s.gauge)
        {
            throw Error(ErrorKind::InvalidArgument,
                        "sector " + std::to_string(s.id) + " has no gauge assigned");
        }
        tau.push_back(*s.gauge);
    }
    return tau;
}

// Norm of the difference of two maps defined on one eigenspace whose images
// may live in different (mutually orthogonal) eigenspaces of the target.
Real block_difference(const TransferBlock* direct, const ComplexMatrix* composed,
                      std::size_t composed_target)
{
    if (direct == nullptr && composed == nullptr)
    {
        return Real(0);
    }
    if (direct == nullptr)
    {
        return spectral_norm(*composed);
    }
    if (composed == nullptr)
    {
        return spectral_norm(direct->matrix);
    }
    if (direct->target_index == composed_target &&
        direct->matrix.rows() == composed->rows() &&
        direct->matrix.cols() == composed->cols())
    {
        return spectral_norm(direct->matrix - *composed);
    }
    ComplexMatrix stacked(direct->matrix.rows() + composed->rows(),
                          direct->matrix.cols());
    stacked << direct->matrix, -*composed;
    return spectral_norm(stacked);
}

} // namespace

ScalingFamily ScalingFamily::from_gauges(const std::vector<Real>& tau)
{
    const auto n = idx(tau.size());
    ScalingFamily f{RealMatrix(n, n)};
    for (Eigen::Index i = 0; i < n; ++i)
    {
        for (Eigen::Index j = 0; j < n; ++j)
        {
            f.lambda(i, j) = (i == j) ? Real(1) : tau[i] / tau[j];
        }
    }
    return f;
}

std::vector<std::string> validate_scaling(const ScalingFamily& family,
                                          const Tolerances& tol)
{
    std::vector<std::string> issues;
    if (family.lambda.rows() != family.lambda.cols())
    {
        issues.push_back("scaling family is not square");
        return issues;
    }
    for (Eigen::Index i = 0; i < family.lambda.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < family.lambda.cols(); ++j)
        {
            const Real& v = family.lambda(i, j);
            if (!is_finite(v) || v <= 0)
            {
                issues.push_back("lambda(" + std::to_string(i) + "," +
                                 std::to_string(j) + ") must be > 0");
            }
        }
        if (abs(family.lambda(i, i) - 1) > tol.cocycle)
        {
            issues.push_back("lambda(" + std::to_string(i) + "," +
                             std::to_string(i) + ") must equal 1");
        }
    }
    return issues;
}

TripleResidual worst_multiplicativity(const ScalingFamily& family)
{
    TripleResidual worst{0, 0, 0, Real(0)};
    const std::size_t n = family.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            for (std::size_t k = 0; k < n; ++k)
            {
                const Real direct   = family(i, k);
                const Real composed = family(i, j) * family(j, k);
                const Real r        = abs(direct - composed) / max(direct, composed);
                if (r > worst.residual)
                {
                    worst = {i, j, k, r};
                }
            }
        }
    }
    return worst;
}

std::vector<Real> recover_gauges(const ScalingFamily& family,
                                 SectorIndex reference, const Tolerances& tol)
{
    if (auto issues = validate_scaling(family, tol); !issues.empty())
    {
        throw Error(ErrorKind::InvalidArgument, issues.front());
    }
    if (reference >= family.size())
    {
        throw Error(ErrorKind::InvalidArgument, "reference sector out of range");
    }
    const TripleResidual worst = worst_multiplicativity(family);
    if (worst.residual > tol.cocycle)
    {
        std::ostringstream msg;
        msg << "lambda(" << worst.i << "," << worst.k << ") != lambda(" << worst.i
            << "," << worst.j << ") * lambda(" << worst.j << "," << worst.k
            << "), relative residual " << to_double(worst.residual);
        throw Error(ErrorKind::MultiplicativityViolation, msg.str());
    }
    std::vector<Real> tau(family.size());
    for (std::size_t i = 0; i < family.size(); ++i)
    {
        tau[i] = family(i, reference);
    }
    return tau;
}

Real check_cycle_consistency(const ScalingFamily& family,
                             const std::vector<SectorIndex>& cycle)
{
    if (cycle.empty() || cycle.front() != cycle.back())
    {
        throw Error(ErrorKind::InvalidCycle, "cycle must start and end at the same sector");
    }
    for (auto s : cycle)
    {
        if (s >= family.size())
        {
            throw Error(ErrorKind::InvalidCycle, "cycle visits unknown sector " +
                                                     std::to_string(s));
        }
    }
    if (cycle.size() == 1)
    {
        return Real(0);
    }
    Real product = 1;
    for (std::size_t r = 0; r + 1 < cycle.size(); ++r)
    {
        product *= family(cycle[r + 1], cycle[r]);
    }
    return abs(product - 1);
}

IsospectralReport check_isospectral(const std::vector<SectorSpec>& sectors,
                                    const Tolerances& tol)
{
    const std::vector<Real> tau = gauges_of(sectors);
    IsospectralReport report;
    for (std::size_t i = 0; i < sectors.size(); ++i)
    {
        for (std::size_t j = i + 1; j < sectors.size(); ++j)
        {
            PairSpectralMatch m{i, j, true, Real(0), {}};
            const auto& a = sectors[i];
            const auto& b = sectors[j];
            if (a.size() != b.size())
            {
                m.pass   = false;
                m.reason = "active spectra have different sizes";
                m.max_mismatch = infinity();
            }
            else
            {
                // Both lists are strictly increasing and tau > 0, so the
                // rescaled lists can only match index by index.
                for (std::size_t n = 0; n < a.size(); ++n)
                {
                    const Real d = abs(tau[i] * a.eigenvalues[n] -
                                       tau[j] * b.eigenvalues[n]);
                    m.max_mismatch = max(m.max_mismatch, d);
                    if (d > tol.eig && m.pass)
                    {
                        m.pass   = false;
                        m.reason = "rescaled eigenvalue " + std::to_string(n) +
                                   " differs";
                    }
                    if (m.pass && a.multiplicity(n) != b.multiplicity(n))
                    {
                        m.pass   = false;
                        m.reason = "multiplicity mismatch at rescaled eigenvalue " +
                                   std::to_string(n);
                    }
                }
            }
            report.pass = report.pass && m.pass;
            report.pairs.push_back(std::move(m));
        }
    }
    return report;
}

const TransferMap& CocycleNetwork::transfer(SectorIndex to, SectorIndex from) const
{
    auto it = transfers.find({to, from});
    if (it == transfers.end())
    {
        throw Error(ErrorKind::InvalidArgument, "missing transfer " +
                                                    std::to_string(from) + "->" +
                                                    std::to_string(to));
    }
    return it->second;
}

std::vector<std::string> validate_network(const CocycleNetwork& net,
                                          const Tolerances& tol)
{
    std::vector<std::string> issues;
    for (std::size_t i = 0; i < net.sectors.size(); ++i)
    {
        if (net.sectors[i].id != i)
        {
            issues.push_back("sector at position " + std::to_string(i) +
                             " has id " + std::to_string(net.sectors[i].id));
        }
        for (auto& s : validate_sector(net.sectors[i]))
        {
            issues.push_back(std::move(s));
        }
    }
    if (!issues.empty())
    {
        return issues;
    }
    for (std::size_t i = 0; i < net.sectors.size(); ++i)
    {
        for (std::size_t j = 0; j < net.sectors.size(); ++j)
        {
            auto it = net.transfers.find({i, j});
            if (it == net.transfers.end())
            {
                issues.push_back("missing transfer " + std::to_string(j) + "->" +
                                 std::to_string(i));
                continue;
            }
            for (auto& s : validate_transfer(it->second, net.sectors[j],
                                             net.sectors[i], tol))
            {
                issues.push_back(std::move(s));
            }
        }
    }
    return issues;
}

CocycleNetwork build_canonical_cocycle(const std::vector<SectorSpec>& sectors,
                                       const UnitaryChoices& unitaries,
                                       const Tolerances& tol)
{
    if (sectors.empty())
    {
        throw Error(ErrorKind::InvalidArgument, "network needs at least one sector");
    }
    for (std::size_t i = 0; i < sectors.size(); ++i)
    {
        if (auto issues = validate_sector(sectors[i]); !issues.empty())
        {
            throw Error(ErrorKind::InvalidArgument, issues.front());
        }
        if (sectors[i].id != i)
        {
            throw Error(ErrorKind::InvalidArgument,
                        "sector ids must match their positions");
        }
    }
    const IsospectralReport iso = check_isospectral(sectors, tol);
    if (!iso.pass)
    {
        for (const auto& p : iso.pairs)
        {
            if (!p.pass)
            {
                throw Error(ErrorKind::SpectralMismatch,
                            "sectors " + std::to_string(p.i) + " and " +
                                std::to_string(p.j) + ": " + p.reason);
            }
        }
    }

    const std::vector<Real> tau = gauges_of(sectors);
    const std::size_t modes     = sectors.front().size();

    // V[i][n] : E_{0,n} -> E_{i,n}
    std::vector<std::vector<ComplexMatrix>> V(sectors.size());
    for (std::size_t i = 0; i < sectors.size(); ++i)
    {
        V[i].resize(modes);
        for (std::size_t n = 0; n < modes; ++n)
        {
            const auto dim = idx(static_cast<std::size_t>(sectors[i].multiplicity(n)));
            auto it        = unitaries.find({i, n});
            if (it == unitaries.end())
            {
                V[i][n] = ComplexMatrix::Identity(dim, dim);
                continue;
            }
            const ComplexMatrix& u = it->second;
            if (u.rows() != dim || u.cols() != dim)
            {
                throw Error(ErrorKind::InvalidArgument,
                            "unitary for sector " + std::to_string(i) +
                                ", eigenvalue " + std::to_string(n) +
                                " has the wrong size");
            }
            if (spectral_norm(u.adjoint() * u - ComplexMatrix::Identity(dim, dim)) >
                tol.unitary)
            {
                throw Error(ErrorKind::InvalidArgument,
                            "choice for sector " + std::to_string(i) +
                                ", eigenvalue " + std::to_string(n) +
                                " is not unitary");
            }
            V[i][n] = u;
        }
    }

    CocycleNetwork net;
    net.sectors = sectors;
    for (std::size_t i = 0; i < sectors.size(); ++i)
    {
        for (std::size_t j = 0; j < sectors.size(); ++j)
        {
            TransferMap k;
            k.from    = j;
            k.to      = i;
            k.scaling = (i == j) ? Real(1) : tau[i] / tau[j];
            for (std::size_t n = 0; n < modes; ++n)
            {
                k.blocks.push_back({n, n, V[i][n] * V[j][n].adjoint()});
            }
            net.transfers.emplace(std::make_pair(i, j), std::move(k));
        }
    }
    return net;
}

ScalingFamily scaling_from_gauges(const CocycleNetwork& net)
{
    return ScalingFamily::from_gauges(gauges_of(net.sectors));
}

CocycleVerification verify_cocycle(const CocycleNetwork& net)
{
    CocycleVerification out{Real(0), {}};
    const std::size_t n = net.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = 0; j < n; ++j)
        {
            for (std::size_t k = 0; k < n; ++k)
            {
                const TransferMap& ik = net.transfer(i, k);
                const TransferMap& ij = net.transfer(i, j);
                const TransferMap& jk = net.transfer(j, k);
                Real worst            = 0;
                for (std::size_t src = 0; src < net.sectors[k].size(); ++src)
                {
                    const TransferBlock* direct = ik.block_for_source(src);
                    const TransferBlock* first  = jk.block_for_source(src);
                    const TransferBlock* second =
                        first ? ij.block_for_source(first->target_index) : nullptr;
                    if (first && second)
                    {
                        const ComplexMatrix composed = second->matrix * first->matrix;
                        worst = max(worst, block_difference(direct, &composed,
                                                            second->target_index));
                    }
                    else
                    {
                        worst = max(worst, block_difference(direct, nullptr, 0));
                    }
                }
                out.triples.push_back({i, j, k, worst});
                out.max_residual = max(out.max_residual, worst);
            }
        }
    }
    return out;
}

IntertwiningVerification verify_intertwining(const CocycleNetwork& net,
                                             const std::vector<Real>& t_grid)
{
    const std::vector<Real> tau = gauges_of(net.sectors);
    IntertwiningVerification out{Real(0), {}};
    for (const auto& [key, map] : net.transfers)
    {
        const auto [to, from]  = key;
        const SectorSpec& src  = net.sectors.at(from);
        const SectorSpec& dst  = net.sectors.at(to);
        const Real lambda      = tau[to] / tau[from];
        Real worst             = 0;
        for (const auto& b : map.blocks)
        {
            const Real alpha_src = src.eigenvalues.at(b.source_index);
            const Real alpha_dst = dst.eigenvalues.at(b.target_index);
            for (Eigen::Index c = 0; c < b.matrix.cols(); ++c)
            {
                const ComplexVector image = b.matrix.col(c); // K_ij phi
                for (const Real& t : t_grid)
                {
                    // K_ij S_j(t) phi and S_i(lambda t) K_ij phi
                    const ComplexVector lhs = image * Complex(exp(-alpha_src * t));
                    const ComplexVector rhs =
                        image * Complex(exp(-alpha_dst * lambda * t));
                    worst = max(worst, spectral_norm(lhs - rhs));
                }
            }
        }
        out.pairs.push_back({to, from, worst});
        out.max_residual = max(out.max_residual, worst);
    }
    return out;
}

IntertwiningVerification verify_generator_identity(const CocycleNetwork& net)
{
    const std::vector<Real> tau = gauges_of(net.sectors);
    IntertwiningVerification out{Real(0), {}};
    for (const auto& [key, map] : net.transfers)
    {
        const auto [to, from] = key;
        const Real lambda     = tau[to] / tau[from];
        Real worst            = 0;
        for (const auto& b : map.blocks)
        {
            const Real alpha_src = net.sectors.at(from).eigenvalues.at(b.source_index);
            const Real alpha_dst = net.sectors.at(to).eigenvalues.at(b.target_index);
            // K A_j phi - lambda A_i K phi = (alpha_src - lambda alpha_dst) K phi
            const ComplexMatrix diff =
                b.matrix * Complex(alpha_src) - b.matrix * Complex(lambda * alpha_dst);
            worst = max(worst, spectral_norm(diff) / max(alpha_src, Real(1)));
        }
        out.pairs.push_back({to, from, worst});
        out.max_residual = max(out.max_residual, worst);
    }
    return out;
}

Real inverse_residual(const CocycleNetwork& net)
{
    Real worst = 0;
    for (std::size_t i = 0; i < net.size(); ++i)
    {
        for (std::size_t j = 0; j < net.size(); ++j)
        {
            const TransferMap& ij = net.transfer(i, j);
            const TransferMap& ji = net.transfer(j, i);
            for (std::size_t src = 0; src < net.sectors[i].size(); ++src)
            {
                const auto dim = idx(static_cast<std::size_t>(net.sectors[i].multiplicity(src)));
                const TransferBlock* first  = ji.block_for_source(src);
                const TransferBlock* second =
                    first ? ij.block_for_source(first->target_index) : nullptr;
                if (!first || !second || second->target_index != src)
                {
                    worst = max(worst, Real(1));
                    continue;
                }
                const ComplexMatrix round = second->matrix * first->matrix;
                worst = max(worst, spectral_norm(round - ComplexMatrix::Identity(dim, dim)));
            }
        }
    }
    return worst;
}

TransportedMode transport_eigenvector(const TransferMap& map,
                                      const SectorSpec& source,
                                      std::size_t source_index,
                                      const ComplexVector& coefficients)
{
    if (source_index >= source.size())
    {
        throw Error(ErrorKind::UnknownEigenvalue,
                    "eigenvalue index " + std::to_string(source_index) +
                        " is not active in sector " + std::to_string(source.id));
    }
    const TransferBlock* block = map.block_for_source(source_index);
    if (block == nullptr)
    {
        throw Error(ErrorKind::UnknownEigenvalue,
                    "transfer " + std::to_string(map.from) + "->" +
                        std::to_string(map.to) + " has no block for eigenvalue index " +
                        std::to_string(source_index));
    }
    if (coefficients.size() != block->matrix.cols())
    {
        throw Error(ErrorKind::InvalidArgument,
                    "coefficient vector does not match the eigenspace dimension");
    }
    return {block->target_index, source.eigenvalues[source_index] / map.scaling,
            block->matrix * coefficients};
}

TransportedMode transport_eigenvector(const TransferMap& map,
                                      const SectorSpec& source, const Real& alpha,
                                      const ComplexVector& coefficients,
                                      const Tolerances& tol)
{
    const auto n = source.find(alpha, tol.eig);
    if (!n)
    {
        throw Error(ErrorKind::UnknownEigenvalue,
                    "eigenvalue " + format_real(alpha) + " is not active in sector " +
                        std::to_string(source.id));
    }
    TransportedMode out = transport_eigenvector(map, source, *n, coefficients);
    out.eigenvalue      = alpha / map.scaling;
    return out;
}

} // namespace sprony
