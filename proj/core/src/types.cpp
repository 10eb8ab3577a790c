#include "sprony/types.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace sprony
{

std::optional<std::size_t> SectorSpec::find(const Real& alpha,
                                            const Real& tol) const
{
    std::optional<std::size_t> best;
    Real best_dist = infinity();
    for (std::size_t n = 0; n < eigenvalues.size(); ++n)
    {
        const Real d = abs(eigenvalues[n] - alpha);
        if (d <= tol && d < best_dist)
        {
            best      = n;
            best_dist = d;
        }
    }
    return best;
}

std::vector<std::string> validate_sector(const SectorSpec& spec)
{
    std::vector<std::string> issues;
    if (spec.eigenvalues.empty())
    {
        issues.push_back("sector " + std::to_string(spec.id) +
                         ": needs at least one strictly positive eigenvalue");
    }
    for (std::size_t n = 0; n < spec.eigenvalues.size(); ++n)
    {
        const Real& a = spec.eigenvalues[n];
        if (!is_finite(a) || a <= 0)
        {
            issues.push_back("sector " + std::to_string(spec.id) +
                             ": eigenvalue " + std::to_string(n) +
                             " is not strictly positive");
        }
        if (n > 0 && !(spec.eigenvalues[n - 1] < a))
        {
            issues.push_back("sector " + std::to_string(spec.id) +
                             ": eigenvalues not strictly increasing at index " +
                             std::to_string(n));
        }
    }
    if (spec.multiplicities.size() != spec.eigenvalues.size())
    {
        issues.push_back("sector " + std::to_string(spec.id) +
                         ": multiplicities length " +
                         std::to_string(spec.multiplicities.size()) +
                         " != eigenvalue count " +
                         std::to_string(spec.eigenvalues.size()));
    }
    for (std::size_t n = 0; n < spec.multiplicities.size(); ++n)
    {
        if (spec.multiplicities[n] < 1)
        {
            issues.push_back("sector " + std::to_string(spec.id) +
                             ": multiplicity " + std::to_string(n) + " < 1");
        }
    }
    if (spec.gauge && (!is_finite(*spec.gauge) || *spec.gauge <= 0))
    {
        issues.push_back("sector " + std::to_string(spec.id) +
                         ": gauge must be > 0");
    }
    return issues;
}

SectorSpec sorted(SectorSpec spec)
{
    const std::size_t n = spec.eigenvalues.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return spec.eigenvalues[a] < spec.eigenvalues[b];
                     });
    std::vector<Real> values;
    std::vector<int> mult;
    values.reserve(n);
    for (auto k : order)
    {
        values.push_back(spec.eigenvalues[k]);
        if (k < spec.multiplicities.size())
        {
            mult.push_back(spec.multiplicities[k]);
        }
    }
    spec.eigenvalues = std::move(values);
    if (mult.size() == n)
    {
        spec.multiplicities = std::move(mult);
    }
    return spec;
}

std::vector<std::string> validate_state(const SectorState& state,
                                        const SectorSpec& spec)
{
    std::vector<std::string> issues;
    const std::string who = "state of sector " + std::to_string(state.sector);
    if (!is_finite(state.weight) || state.weight <= 0)
    {
        issues.push_back(who + ": weight must be > 0");
    }
    for (const auto& [n, coeffs] : state.coefficients)
    {
        if (n >= spec.size())
        {
            issues.push_back(who + ": eigenvalue index " + std::to_string(n) +
                             " outside the active spectrum");
            continue;
        }
        if (coeffs.size() != static_cast<std::size_t>(spec.multiplicity(n)))
        {
            issues.push_back(who + ": coefficient vector at index " +
                             std::to_string(n) +
                             " does not match the eigenspace dimension");
        }
    }
    return issues;
}

const TransferBlock* TransferMap::block_for_source(std::size_t source_index) const
{
    for (const auto& b : blocks)
    {
        if (b.source_index == source_index)
        {
            return &b;
        }
    }
    return nullptr;
}

std::vector<std::string> validate_transfer(const TransferMap& map,
                                           const SectorSpec& source,
                                           const SectorSpec& target,
                                           const Tolerances& tol)
{
    std::vector<std::string> issues;
    const std::string who = "transfer " + std::to_string(map.from) + "->" +
                            std::to_string(map.to);
    if (!is_finite(map.scaling) || map.scaling <= 0)
    {
        issues.push_back(who + ": scaling must be > 0");
    }
    std::set<std::size_t> seen;
    for (const auto& b : map.blocks)
    {
        if (!seen.insert(b.source_index).second)
        {
            issues.push_back(who + ": duplicate block for source index " +
                             std::to_string(b.source_index));
        }
        if (b.source_index >= source.size() || b.target_index >= target.size())
        {
            issues.push_back(who + ": block index out of range");
            continue;
        }
        const auto rows = static_cast<Eigen::Index>(target.multiplicity(b.target_index));
        const auto cols = static_cast<Eigen::Index>(source.multiplicity(b.source_index));
        if (b.matrix.rows() != rows || b.matrix.cols() != cols)
        {
            issues.push_back(who + ": block size mismatch at source index " +
                             std::to_string(b.source_index));
            continue;
        }
        const ComplexMatrix gram = b.matrix.adjoint() * b.matrix;
        const ComplexMatrix eye  = ComplexMatrix::Identity(cols, cols);
        if (spectral_norm(gram - eye) > tol.unitary)
        {
            issues.push_back(who + ": block at source index " +
                             std::to_string(b.source_index) + " is not unitary");
        }
    }
    return issues;
}

Complex ObservationFunctional::atom(std::size_t n, std::size_t basis) const
{
    auto it = atoms.find({n, basis});
    return it == atoms.end() ? Complex(0) : it->second;
}

std::vector<Real> ExponentialModel::rates() const
{
    std::vector<Real> out;
    out.reserve(terms.size());
    for (const auto& t : terms)
    {
        out.push_back(t.rate);
    }
    return out;
}

std::vector<Complex> ExponentialModel::amplitudes() const
{
    std::vector<Complex> out;
    out.reserve(terms.size());
    for (const auto& t : terms)
    {
        out.push_back(t.amplitude);
    }
    return out;
}

std::vector<std::string> validate_model(const ExponentialModel& model,
                                        const Tolerances& tol)
{
    std::vector<std::string> issues;
    for (std::size_t l = 0; l < model.terms.size(); ++l)
    {
        const auto& t = model.terms[l];
        if (!is_finite(t.rate) || t.rate <= 0)
        {
            issues.push_back("term " + std::to_string(l) + ": rate must be > 0");
        }
        if (magnitude(t.amplitude) <= tol.amp)
        {
            issues.push_back("term " + std::to_string(l) + ": zero amplitude");
        }
        for (std::size_t k = 0; k < l; ++k)
        {
            if (abs(model.terms[k].rate - t.rate) <= tol.eig)
            {
                issues.push_back("terms " + std::to_string(k) + " and " +
                                 std::to_string(l) + " share a rate");
            }
        }
    }
    return issues;
}

ExponentialModel sorted(ExponentialModel model)
{
    std::stable_sort(model.terms.begin(), model.terms.end(),
                     [](const ExponentialTerm& a, const ExponentialTerm& b) {
                         return a.rate < b.rate;
                     });
    return model;
}

std::vector<std::string> validate_window(const SampleWindow& window)
{
    std::vector<std::string> issues;
    if (!is_finite(window.step) || window.step <= 0)
    {
        issues.push_back("window: step must be > 0");
    }
    if (window.values.size() < 2)
    {
        issues.push_back("window: needs at least 2 samples");
    }
    if (window.noise_level < 0)
    {
        issues.push_back("window: noise level must be >= 0");
    }
    return issues;
}

} // namespace sprony
