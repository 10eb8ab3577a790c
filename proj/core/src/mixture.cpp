#include "sprony/mixture.hpp"

#include <algorithm>
#include <random>

#include "sprony/error.hpp"

namespace sprony
{

std::vector<std::string> validate_mixture(const MixtureSpec& spec,
                                          const Tolerances& tol)
{
    std::vector<std::string> issues = validate_network(spec.network, tol);
    if (spec.reference >= spec.network.size())
    {
        issues.push_back("reference sector " + std::to_string(spec.reference) +
                         " does not exist");
    }
    for (const auto& st : spec.states)
    {
        if (st.sector >= spec.network.size())
        {
            issues.push_back("state refers to unknown sector " +
                             std::to_string(st.sector));
            continue;
        }
        for (auto& s : validate_state(st, spec.network.sectors[st.sector]))
        {
            issues.push_back(std::move(s));
        }
    }
    return issues;
}

std::vector<ModalTerm> modal_atoms(const MixtureSpec& spec, const Tolerances& tol)
{
    if (auto issues = validate_mixture(spec, tol); !issues.empty())
    {
        throw Error(ErrorKind::InvalidArgument, issues.front());
    }
    std::vector<ModalTerm> out;
    for (const auto& st : spec.states)
    {
        const SectorSpec& sector = spec.network.sectors[st.sector];
        const TransferMap& k0i   = spec.network.transfer(spec.reference, st.sector);
        for (const auto& [n, xi] : st.coefficients)
        {
            const bool zero = std::all_of(xi.begin(), xi.end(),
                                          [](const Complex& c) { return c == Complex(0); });
            if (zero)
            {
                continue;
            }
            ModalTerm term;
            term.sector = st.sector;
            term.index  = n;
            term.alpha  = sector.eigenvalues[n];
            term.xi     = xi;
            term.weight = st.weight;

            const auto dim = static_cast<Eigen::Index>(xi.size());
            Complex observed(0);
            for (Eigen::Index b = 0; b < dim; ++b)
            {
                ComplexVector basis = ComplexVector::Zero(dim);
                basis(b)            = Complex(1);
                const TransportedMode image =
                    transport_eigenvector(k0i, sector, n, basis);
                Complex atom(0);
                for (Eigen::Index r = 0; r < image.coefficients.size(); ++r)
                {
                    atom += spec.observation.atom(image.target_index,
                                                  static_cast<std::size_t>(r)) *
                            image.coefficients(r);
                }
                term.atoms.push_back(atom);
                observed += atom * xi[static_cast<std::size_t>(b)];
            }
            term.coefficient = Complex(st.weight) * observed;
            out.push_back(std::move(term));
        }
    }
    return out;
}

Complex channel_atom(const MixtureSpec& spec, SectorIndex sector, std::size_t index)
{
    if (sector >= spec.network.size())
    {
        throw Error(ErrorKind::InvalidArgument, "unknown sector " + std::to_string(sector));
    }
    const SectorSpec& s = spec.network.sectors[sector];
    if (index >= s.size())
    {
        throw Error(ErrorKind::UnknownEigenvalue,
                    "eigenvalue index " + std::to_string(index) +
                        " is not active in sector " + std::to_string(sector));
    }
    if (s.multiplicity(index) != 1)
    {
        throw Error(ErrorKind::NonSimpleEigenvalue,
                    "eigenvalue " + std::to_string(index) + " of sector " +
                        std::to_string(sector) + " is not simple");
    }
    const TransportedMode image =
        transport_eigenvector(spec.network.transfer(spec.reference, sector), s, index,
                              ComplexVector::Constant(1, Complex(1)));
    Complex atom(0);
    for (Eigen::Index r = 0; r < image.coefficients.size(); ++r)
    {
        atom += spec.observation.atom(image.target_index, static_cast<std::size_t>(r)) *
                image.coefficients(r);
    }
    return atom;
}

Real sector_weight(const MixtureSpec& spec, SectorIndex sector)
{
    for (const auto& st : spec.states)
    {
        if (st.sector == sector)
        {
            return st.weight;
        }
    }
    throw Error(ErrorKind::InvalidArgument,
                "no state (and hence no weight) for sector " + std::to_string(sector));
}

ExponentialModel merge_terms(const ExponentialModel& model, const Tolerances& tol)
{
    const ExponentialModel ordered = sorted(model);
    ExponentialModel out;
    std::size_t l = 0;
    while (l < ordered.terms.size())
    {
        const Real anchor = ordered.terms[l].rate;
        std::size_t end   = l;
        Real rate_sum     = 0;
        Complex amp(0);
        bool tag_shared = true;
        const auto& first_tag = ordered.terms[l].tag;
        while (end < ordered.terms.size() &&
               abs(ordered.terms[end].rate - anchor) <= tol.eig)
        {
            const auto& t = ordered.terms[end];
            rate_sum += t.rate;
            amp += t.amplitude;
            if (!first_tag || !t.tag || t.tag->sector != first_tag->sector ||
                t.tag->index != first_tag->index)
            {
                tag_shared = false;
            }
            ++end;
        }
        if (magnitude(amp) > tol.amp)
        {
            ExponentialTerm merged;
            merged.rate      = (end - l == 1) ? anchor : rate_sum / Real(end - l);
            merged.amplitude = amp;
            if (tag_shared)
            {
                merged.tag = first_tag;
            }
            out.terms.push_back(std::move(merged));
        }
        l = end;
    }
    return out;
}

ExponentialModel collapse(const MixtureSpec& spec, const Tolerances& tol)
{
    ExponentialModel raw;
    for (const auto& m : modal_atoms(spec, tol))
    {
        raw.terms.push_back({m.alpha, m.coefficient, SectorTag{m.sector, m.index, m.alpha}});
    }
    return merge_terms(raw, tol);
}

Complex evaluate(const ExponentialModel& model, const Real& t)
{
    if (t < 0)
    {
        throw Error(ErrorKind::NegativeTime, "observable is defined for t >= 0");
    }
    Complex sum(0);
    for (const auto& term : model.terms)
    {
        sum += term.amplitude * Complex(exp(-term.rate * t));
    }
    return sum;
}

SampleWindow sample_uniform(const ExponentialModel& model, const Real& h,
                            std::size_t count)
{
    if (!is_finite(h) || h <= 0)
    {
        throw Error(ErrorKind::InvalidArgument, "sampling step must be > 0");
    }
    if (count < 1)
    {
        throw Error(ErrorKind::InvalidArgument, "sample count must be >= 1");
    }
    SampleWindow w;
    w.step = h;
    w.values.reserve(count);
    for (std::size_t n = 0; n < count; ++n)
    {
        w.values.push_back(evaluate(model, Real(n) * h));
    }
    return w;
}

SampleWindow add_noise(const SampleWindow& window, const Real& epsilon,
                       std::uint64_t seed)
{
    if (!is_finite(epsilon) || epsilon < 0)
    {
        throw Error(ErrorKind::InvalidArgument, "noise level must be >= 0");
    }
    SampleWindow out = window;
    out.noise_level  = epsilon;
    out.seed         = seed;
    if (epsilon == 0 || window.values.empty())
    {
        return out;
    }
    const bool real_valued = std::all_of(window.values.begin(), window.values.end(),
                                         [](const Complex& c) { return c.imag() == 0; });
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Complex> delta(window.values.size());
    Real norm2 = 0;
    for (auto& d : delta)
    {
        const Real re = normal(gen);
        const Real im = real_valued ? Real(0) : Real(normal(gen));
        d             = Complex(re, im);
        norm2 += re * re + im * im;
    }
    const Real scale = epsilon / sqrt(norm2);
    for (std::size_t n = 0; n < delta.size(); ++n)
    {
        out.values[n] += delta[n] * Complex(scale);
    }
    return out;
}

DirichletSector dirichlet_sector(const Real& length, std::size_t mode_count,
                                 const Real& observation_point, SectorIndex id)
{
    if (!(length > 0) || !is_finite(length))
    {
        throw Error(ErrorKind::InvalidArgument, "domain length must be > 0");
    }
    if (!(observation_point > 0 && observation_point < length))
    {
        throw Error(ErrorKind::InvalidArgument,
                    "observation point must lie strictly inside (0, length)");
    }
    if (mode_count < 1)
    {
        throw Error(ErrorKind::InvalidArgument, "need at least one mode");
    }
    DirichletSector out;
    out.sector.id = id;
    const Real norm = sqrt(Real(2) / length);
    for (std::size_t n = 1; n <= mode_count; ++n)
    {
        const Real k = Real(n) * pi() / length;
        out.sector.eigenvalues.push_back(k * k);
        out.sector.multiplicities.push_back(1);
        out.atoms.emplace_back(norm * sin(k * observation_point));
    }
    return out;
}

ObservationFunctional observation_from_atoms(const std::vector<Complex>& atoms)
{
    ObservationFunctional f;
    for (std::size_t n = 0; n < atoms.size(); ++n)
    {
        f.atoms[{n, 0}] = atoms[n];
    }
    return f;
}

} // namespace sprony
