#include "sprony/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "sprony/error.hpp"

namespace sprony::io
{

using nlohmann::json;

namespace
{

// Builds a DOM in which every floating-point literal is kept as its source
// text, so nothing is rounded through double on the way in.
class ExactSax : public nlohmann::json_sax<json>
{
public:
    explicit ExactSax(json& root) : root_(root) {}

    bool null() override { return put(nullptr); }
    bool boolean(bool v) override { return put(v); }
    bool number_integer(number_integer_t v) override { return put(v); }
    bool number_unsigned(number_unsigned_t v) override { return put(v); }
    bool number_float(number_float_t, const string_t& s) override { return put(s); }
    bool string(string_t& s) override { return put(s); }
    bool binary(binary_t&) override { return false; }
    bool start_object(std::size_t) override
    {
        stack_.push_back(slot(json::object()));
        return true;
    }
    bool key(string_t& k) override
    {
        key_ = k;
        return true;
    }
    bool end_object() override
    {
        stack_.pop_back();
        return true;
    }
    bool start_array(std::size_t) override
    {
        stack_.push_back(slot(json::array()));
        return true;
    }
    bool end_array() override
    {
        stack_.pop_back();
        return true;
    }
    bool parse_error(std::size_t, const std::string&,
                     const nlohmann::detail::exception& ex) override
    {
        throw Error(ErrorKind::ParseError, ex.what());
    }

private:
    json* slot(json value)
    {
        if (stack_.empty())
        {
            root_ = std::move(value);
            return &root_;
        }
        json& top = *stack_.back();
        if (top.is_array())
        {
            top.push_back(std::move(value));
            return &top.back();
        }
        top[key_] = std::move(value);
        return &top[key_];
    }
    template <class T> bool put(T&& v)
    {
        slot(json(std::forward<T>(v)));
        return true;
    }

    json& root_;
    std::vector<json*> stack_;
    std::string key_;
};

json parse(const std::string& text)
{
    json root;
    ExactSax sax(root);
    json::sax_parse(text, &sax);
    return root;
}

[[noreturn]] void bad(const std::string& what)
{
    throw Error(ErrorKind::ParseError, what);
}

const json& field(const json& j, const char* name)
{
    if (!j.is_object() || !j.contains(name))
    {
        bad(std::string("missing field \"") + name + "\"");
    }
    return j.at(name);
}

Real real_of(const json& j)
{
    if (j.is_number_integer())
    {
        return j.is_number_unsigned() ? Real(j.get<std::uint64_t>())
                                      : Real(j.get<std::int64_t>());
    }
    if (j.is_number_float())
    {
        return Real(j.get<double>());
    }
    if (j.is_string())
    {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf" || s == "+inf")
        {
            return infinity();
        }
        if (s == "-inf")
        {
            return -infinity();
        }
        return parse_real(s);
    }
    bad("expected a real number, got " + j.dump());
}

json real_json(const Real& x)
{
    if (!is_finite(x))
    {
        if (x > 0)
        {
            return "inf";
        }
        if (x < 0)
        {
            return "-inf";
        }
        return "nan";
    }
    const double d = to_double(x);
    if (Real(d) == x)
    {
        json j = d;
        if (parse_real(j.dump()) == x)
        {
            return j;
        }
    }
    return format_real(x);
}

Complex complex_of(const json& j)
{
    if (j.is_array())
    {
        if (j.size() != 2)
        {
            bad("complex value must be [re, im]");
        }
        return {real_of(j[0]), real_of(j[1])};
    }
    return Complex(real_of(j));
}

json complex_json(const Complex& z) { return json::array({real_json(z.real()), real_json(z.imag())}); }

std::size_t index_of(const json& j)
{
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                   j.get<std::int64_t>() < 0))
    {
        bad("expected a nonnegative integer, got " + j.dump());
    }
    return j.get<std::size_t>();
}

json sector_json(const SectorSpec& s)
{
    json j;
    j["id"] = s.id;
    j["eigenvalues"] = json::array();
    for (const auto& a : s.eigenvalues)
    {
        j["eigenvalues"].push_back(real_json(a));
    }
    j["multiplicities"] = s.multiplicities;
    if (s.gauge)
    {
        j["gauge"] = real_json(*s.gauge);
    }
    return j;
}

SectorSpec sector_of(const json& j)
{
    SectorSpec s;
    s.id = index_of(field(j, "id"));
    for (const auto& a : field(j, "eigenvalues"))
    {
        s.eigenvalues.push_back(real_of(a));
    }
    if (j.contains("multiplicities"))
    {
        for (const auto& m : j.at("multiplicities"))
        {
            if (!m.is_number_integer())
            {
                bad("multiplicity must be an integer");
            }
            s.multiplicities.push_back(m.get<int>());
        }
    }
    else
    {
        s.multiplicities.assign(s.eigenvalues.size(), 1);
    }
    if (j.contains("gauge") && !j.at("gauge").is_null())
    {
        s.gauge = real_of(j.at("gauge"));
    }
    return s;
}

json state_json(const SectorState& st)
{
    json j;
    j["sector"]       = st.sector;
    j["weight"]       = real_json(st.weight);
    j["coefficients"] = json::array();
    for (const auto& [n, xi] : st.coefficients)
    {
        json v = json::array();
        for (const auto& c : xi)
        {
            v.push_back(complex_json(c));
        }
        j["coefficients"].push_back({{"n", n}, {"value", v}});
    }
    return j;
}

SectorState state_of(const json& j)
{
    SectorState st;
    st.sector = index_of(field(j, "sector"));
    if (j.contains("weight"))
    {
        st.weight = real_of(j.at("weight"));
    }
    for (const auto& c : field(j, "coefficients"))
    {
        const std::size_t n = index_of(field(c, "n"));
        const json& value   = field(c, "value");
        std::vector<Complex> xi;
        // a single scalar, a single [re, im] pair, or a list of either
        const bool list = value.is_array() && !value.empty() &&
                          (value[0].is_array() || value.size() != 2);
        if (list)
        {
            for (const auto& v : value)
            {
                xi.push_back(complex_of(v));
            }
        }
        else
        {
            xi.push_back(complex_of(value));
        }
        if (!st.coefficients.emplace(n, std::move(xi)).second)
        {
            bad("duplicate coefficient for eigenvalue index " + std::to_string(n));
        }
    }
    return st;
}

json transfer_json(const TransferMap& m)
{
    json j;
    j["from"]    = m.from;
    j["to"]      = m.to;
    j["scaling"] = real_json(m.scaling);
    j["blocks"]  = json::array();
    for (const auto& b : m.blocks)
    {
        json rows = json::array();
        for (Eigen::Index r = 0; r < b.matrix.rows(); ++r)
        {
            json row = json::array();
            for (Eigen::Index c = 0; c < b.matrix.cols(); ++c)
            {
                row.push_back(complex_json(b.matrix(r, c)));
            }
            rows.push_back(row);
        }
        j["blocks"].push_back(
            {{"source_index", b.source_index}, {"target_index", b.target_index}, {"matrix", rows}});
    }
    return j;
}

TransferMap transfer_of(const json& j)
{
    TransferMap m;
    m.from    = index_of(field(j, "from"));
    m.to      = index_of(field(j, "to"));
    m.scaling = real_of(field(j, "scaling"));
    for (const auto& b : field(j, "blocks"))
    {
        TransferBlock block;
        block.source_index = index_of(field(b, "source_index"));
        block.target_index = index_of(field(b, "target_index"));
        const json& rows   = field(b, "matrix");
        const auto nr      = static_cast<Eigen::Index>(rows.size());
        const auto nc      = nr == 0 ? Eigen::Index(0) : static_cast<Eigen::Index>(rows[0].size());
        block.matrix.resize(nr, nc);
        for (Eigen::Index r = 0; r < nr; ++r)
        {
            if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != nc)
            {
                bad("ragged transfer block");
            }
            for (Eigen::Index c = 0; c < nc; ++c)
            {
                block.matrix(r, c) = complex_of(
                    rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
            }
        }
        m.blocks.push_back(std::move(block));
    }
    return m;
}

json observation_json(const ObservationFunctional& obs)
{
    json atoms = json::array();
    for (const auto& [key, value] : obs.atoms)
    {
        atoms.push_back({{"n", key.first}, {"basis", key.second}, {"value", complex_json(value)}});
    }
    return {{"atoms", atoms}};
}

ObservationFunctional observation_of(const json& j)
{
    ObservationFunctional obs;
    for (const auto& a : field(j, "atoms"))
    {
        const std::size_t n     = index_of(field(a, "n"));
        const std::size_t basis = a.contains("basis") ? index_of(a.at("basis")) : 0;
        obs.atoms[{n, basis}]   = complex_of(field(a, "value"));
    }
    return obs;
}

template <class F> auto guarded(F&& f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

} // namespace

std::string mixture_to_json(const MixtureSpec& spec)
{
    json j;
    j["reference"] = spec.reference;
    j["sectors"]   = json::array();
    for (const auto& s : spec.network.sectors)
    {
        j["sectors"].push_back(sector_json(s));
    }
    j["transfers"] = json::array();
    for (const auto& [key, m] : spec.network.transfers)
    {
        j["transfers"].push_back(transfer_json(m));
    }
    j["states"] = json::array();
    for (const auto& st : spec.states)
    {
        j["states"].push_back(state_json(st));
    }
    j["observation"] = observation_json(spec.observation);
    return j.dump(2) + "\n";
}

MixtureSpec mixture_from_json(const std::string& text, const Tolerances& tol)
{
    return guarded([&] {
        const json j = parse(text);
        MixtureSpec spec;
        std::vector<SectorSpec> sectors;
        for (const auto& s : field(j, "sectors"))
        {
            sectors.push_back(sector_of(s));
        }
        for (std::size_t i = 0; i < sectors.size(); ++i)
        {
            if (sectors[i].id != i)
            {
                bad("sector ids must be 0, 1, ... in order; found " +
                    std::to_string(sectors[i].id) + " at position " + std::to_string(i));
            }
            if (auto issues = validate_sector(sectors[i]); !issues.empty())
            {
                throw Error(ErrorKind::InvalidArgument,
                            "sector " + std::to_string(i) + ": " + issues.front());
            }
        }
        if (j.contains("transfers") && !j.at("transfers").empty())
        {
            spec.network.sectors = sectors;
            for (const auto& t : j.at("transfers"))
            {
                TransferMap m = transfer_of(t);
                spec.network.transfers[{m.to, m.from}] = std::move(m);
            }
        }
        else
        {
            spec.network = build_canonical_cocycle(sectors, {}, tol);
        }
        if (j.contains("reference"))
        {
            spec.reference = index_of(j.at("reference"));
        }
        if (j.contains("states"))
        {
            for (const auto& st : j.at("states"))
            {
                spec.states.push_back(state_of(st));
            }
        }
        if (j.contains("observation"))
        {
            spec.observation = observation_of(j.at("observation"));
        }
        if (auto issues = validate_mixture(spec, tol); !issues.empty())
        {
            throw Error(ErrorKind::InvalidArgument, issues.front());
        }
        return spec;
    });
}

std::string sector_to_json(const SectorSpec& sector) { return sector_json(sector).dump(); }
SectorSpec sector_from_json(const std::string& text)
{
    return guarded([&] { return sector_of(parse(text)); });
}
std::string state_to_json(const SectorState& state) { return state_json(state).dump(); }
SectorState state_from_json(const std::string& text)
{
    return guarded([&] { return state_of(parse(text)); });
}
std::string transfer_to_json(const TransferMap& map) { return transfer_json(map).dump(); }
TransferMap transfer_from_json(const std::string& text)
{
    return guarded([&] { return transfer_of(parse(text)); });
}
std::string observation_to_json(const ObservationFunctional& obs)
{
    return observation_json(obs).dump();
}
ObservationFunctional observation_from_json(const std::string& text)
{
    return guarded([&] { return observation_of(parse(text)); });
}

std::string model_to_json(const ExponentialModel& model)
{
    json terms = json::array();
    for (const auto& t : model.terms)
    {
        json term = {{"rate", real_json(t.rate)},
                     {"amp_re", real_json(t.amplitude.real())},
                     {"amp_im", real_json(t.amplitude.imag())}};
        if (t.tag)
        {
            term["sector"] = t.tag->sector;
            term["index"]  = t.tag->index;
            term["alpha"]  = real_json(t.tag->alpha);
        }
        terms.push_back(term);
    }
    return json{{"terms", terms}}.dump(2) + "\n";
}

ExponentialModel model_from_json(const std::string& text)
{
    return guarded([&] {
        const json j = parse(text);
        ExponentialModel m;
        for (const auto& t : field(j, "terms"))
        {
            ExponentialTerm term;
            term.rate      = real_of(field(t, "rate"));
            term.amplitude = Complex(real_of(field(t, "amp_re")),
                                     t.contains("amp_im") ? real_of(t.at("amp_im")) : Real(0));
            if (t.contains("sector"))
            {
                term.tag = SectorTag{index_of(t.at("sector")),
                                     t.contains("index") ? index_of(t.at("index")) : 0,
                                     real_of(field(t, "alpha"))};
            }
            m.terms.push_back(std::move(term));
        }
        return m;
    });
}

std::string tagged_to_json(const TaggedModel& model)
{
    json terms = json::array();
    for (const auto& t : model.terms)
    {
        terms.push_back({{"rate_raw", real_json(t.rate_raw)},
                         {"rate_snapped", real_json(t.rate_snapped)},
                         {"amp", complex_json(t.amplitude)},
                         {"sector", t.sector},
                         {"index", t.index},
                         {"alpha", real_json(t.alpha)}});
    }
    return json{{"terms", terms}, {"gap", real_json(model.gap)}}.dump(2) + "\n";
}

TaggedModel tagged_from_json(const std::string& text)
{
    return guarded([&] {
        const json j = parse(text);
        TaggedModel m;
        for (const auto& t : field(j, "terms"))
        {
            TaggedTerm term;
            term.rate_raw     = real_of(field(t, "rate_raw"));
            term.rate_snapped = real_of(field(t, "rate_snapped"));
            term.amplitude    = complex_of(field(t, "amp"));
            term.sector       = index_of(field(t, "sector"));
            term.index        = index_of(field(t, "index"));
            term.alpha        = real_of(field(t, "alpha"));
            m.terms.push_back(term);
        }
        m.gap = real_of(field(j, "gap"));
        return m;
    });
}

std::string window_to_csv(const SampleWindow& window)
{
    std::ostringstream out;
    out << "n,t,y_re,y_im\n";
    for (std::size_t n = 0; n < window.size(); ++n)
    {
        out << n << ',' << format_real(Real(n) * window.step) << ','
            << format_real(window.values[n].real()) << ','
            << format_real(window.values[n].imag()) << '\n';
    }
    return out.str();
}

std::string window_sidecar_json(const SampleWindow& window)
{
    json j = {{"h", real_json(window.step)}, {"noise_level", real_json(window.noise_level)}};
    j["seed"] = window.seed ? json(*window.seed) : json(nullptr);
    return j.dump(2) + "\n";
}

SampleWindow window_from_csv(const std::string& csv, const std::string& sidecar)
{
    SampleWindow w = guarded([&] {
        const json j = parse(sidecar);
        SampleWindow out;
        out.step = real_of(field(j, "h"));
        if (j.contains("noise_level"))
        {
            out.noise_level = real_of(j.at("noise_level"));
        }
        if (j.contains("seed") && !j.at("seed").is_null())
        {
            out.seed = j.at("seed").get<unsigned long long>();
        }
        return out;
    });

    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line.rfind("n,t,y_re", 0) != 0)
    {
        bad("window CSV must start with the header n,t,y_re,y_im");
    }
    std::size_t expected = 0;
    while (std::getline(in, line))
    {
        if (line.empty() || line == "\r")
        {
            continue;
        }
        if (line.back() == '\r')
        {
            line.pop_back();
        }
        std::vector<std::string> cells;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ','))
        {
            cells.push_back(cell);
        }
        if (cells.size() < 3 || cells.size() > 4)
        {
            bad("malformed window row: " + line);
        }
        if (cells[0].empty() ||
            cells[0].find_first_not_of("0123456789") != std::string::npos ||
            std::stoull(cells[0]) != expected)
        {
            bad("window rows must be consecutive from n = 0");
        }
        ++expected;
        w.values.emplace_back(parse_real(cells[2]),
                              cells.size() == 4 ? parse_real(cells[3]) : Real(0));
    }
    if (auto issues = validate_window(w); !issues.empty())
    {
        throw Error(ErrorKind::InvalidArgument, issues.front());
    }
    return w;
}

std::string stability_to_json(const StabilityReport& r)
{
    json j;
    j["kappa_exp"]         = real_json(r.kappa_exp);
    j["kappa_upper_bound"] = real_json(r.kappa_upper_bound);
    j["gap"]               = real_json(r.gap);
    j["epsilon0"]          = real_json(r.epsilon0);
    j["mu_max"]            = real_json(r.mu_max);
    j["C3"]                = real_json(r.C3);
    j["C_L"]               = real_json(r.C_L);
    j["intra_gaps"]        = json::array();
    for (const auto& [sector, d] : r.intra_gaps)
    {
        j["intra_gaps"].push_back({{"sector", sector}, {"value", real_json(d)}});
    }
    j["observability_inverses"] = json::array();
    for (const auto& [key, v] : r.observability_inverses)
    {
        j["observability_inverses"].push_back(
            {{"sector", key.first}, {"index", key.second}, {"value", real_json(v)}});
    }
    return j.dump(2) + "\n";
}

StabilityReport stability_from_json(const std::string& text)
{
    return guarded([&] {
        const json j = parse(text);
        StabilityReport r;
        r.kappa_exp         = real_of(field(j, "kappa_exp"));
        r.kappa_upper_bound = real_of(field(j, "kappa_upper_bound"));
        r.gap               = real_of(field(j, "gap"));
        r.epsilon0          = real_of(field(j, "epsilon0"));
        r.mu_max            = real_of(field(j, "mu_max"));
        r.C3                = real_of(field(j, "C3"));
        r.C_L               = real_of(field(j, "C_L"));
        for (const auto& g : field(j, "intra_gaps"))
        {
            r.intra_gaps[index_of(field(g, "sector"))] = real_of(field(g, "value"));
        }
        for (const auto& o : field(j, "observability_inverses"))
        {
            r.observability_inverses[{index_of(field(o, "sector")), index_of(field(o, "index"))}] =
                real_of(field(o, "value"));
        }
        return r;
    });
}

std::string components_to_json(const std::vector<EigencomponentEstimate>& components)
{
    json out = json::array();
    for (const auto& c : components)
    {
        out.push_back({{"sector", c.sector},
                       {"index", c.index},
                       {"alpha", real_json(c.alpha)},
                       {"coefficient", complex_json(c.coefficient)},
                       {"observability", complex_json(c.observability)}});
    }
    return json{{"components", out}}.dump(2) + "\n";
}

std::string verification_to_json(const NetworkVerification& v)
{
    json j;
    j["pass"]   = v.pass;
    j["gauges"] = json::array();
    for (const auto& t : v.gauges)
    {
        j["gauges"].push_back(real_json(t));
    }
    json pairs = json::array();
    for (const auto& p : v.isospectral.pairs)
    {
        pairs.push_back({{"i", p.i},
                         {"j", p.j},
                         {"pass", p.pass},
                         {"max_mismatch", real_json(p.max_mismatch)},
                         {"reason", p.reason}});
    }
    j["isospectral"] = {{"pass", v.isospectral.pass}, {"pairs", pairs}};
    json triples     = json::array();
    for (const auto& t : v.cocycle.triples)
    {
        triples.push_back({{"i", t.i}, {"j", t.j}, {"k", t.k}, {"residual", real_json(t.residual)}});
    }
    j["cocycle"] = {{"max_residual", real_json(v.cocycle.max_residual)}, {"triples", triples}};
    auto pair_list = [](const IntertwiningVerification& iv) {
        json list = json::array();
        for (const auto& p : iv.pairs)
        {
            list.push_back({{"to", p.to}, {"from", p.from}, {"residual", real_json(p.residual)}});
        }
        return json{{"max_residual", real_json(iv.max_residual)}, {"pairs", list}};
    };
    j["intertwining"]       = pair_list(v.intertwining);
    j["generator_identity"] = pair_list(v.generator);
    j["inverse_residual"]   = real_json(v.inverse_residual);
    return j.dump(2) + "\n";
}

std::string sweep_to_csv(const std::vector<SweepRecord>& records)
{
    std::ostringstream out;
    out << "epsilon,trial,param_error,tag_ok,recon_ok\n";
    for (const auto& r : records)
    {
        for (std::size_t k = 0; k < r.errors.size(); ++k)
        {
            out << format_real(r.epsilon) << ',' << k << ','
                << (is_finite(r.errors[k]) ? format_real(r.errors[k]) : std::string("inf"))
                << ',' << (r.tag_ok[k] ? 1 : 0) << ',' << (r.recon_ok[k] ? 1 : 0) << '\n';
        }
    }
    return out.str();
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv)
{
    std::filesystem::path p = csv;
    p.replace_extension(".json");
    return p;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw Error(ErrorKind::InvalidArgument, "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::error_code ec;
    if (path.has_parent_path())
    {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    }
    out << content;
}

} // namespace sprony::io
