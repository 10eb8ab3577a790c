#include <algorithm>
#include <filesystem>
#include <sstream>

#include "doctest.h"

#include "cli.hpp"
#include "sprony/fixtures.hpp"
#include "sprony/io.hpp"
#include "support.hpp"

using namespace sprony;
namespace fs = std::filesystem;

namespace
{

struct Run
{
    int code;
    std::string out, err;
};

class Workspace
{
public:
    explicit Workspace(const std::string& name)
        : dir_(fs::temp_directory_path() / ("sprony_cli_" + name))
    {
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Workspace() { fs::remove_all(dir_); }

    Run operator()(std::vector<std::string> args) const
    {
        args.insert(args.begin(), {"--dir", dir_.string()});
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return {code, out.str(), err.str()};
    }

    std::string read(const std::string& file) const { return io::read_file(dir_ / file); }
    fs::path path(const std::string& file) const { return dir_ / file; }

private:
    fs::path dir_;
};

} // namespace

TEST_CASE("cli: full pipeline on the Dirichlet pair matches the library")
{
    Workspace ws("pipeline");
    REQUIRE(ws({"fixture", "ex6"}).code == 0);
    const Run verify = ws({"verify-network"});
    CHECK(verify.code == 0);
    CHECK(ws.read("verification.json").find("\"pass\": true") != std::string::npos);

    REQUIRE(ws({"sample", "--h", "0.05"}).code == 0);
    const Run recon = ws({"reconstruct", "--L", "3"});
    REQUIRE(recon.code == 0);
    CHECK(recon.out.find("rate 3.2898681337") != std::string::npos);

    const Fixture fx              = fixture_ex6();
    const ExponentialModel direct = reconstruct(sample_uniform(collapse(fx.spec), fx.h, 6), 3);
    const ExponentialModel viacli = io::model_from_json(ws.read("model.json"));
    REQUIRE(viacli.size() == 3);
    for (std::size_t l = 0; l < 3; ++l)
    {
        CHECK(viacli.terms[l].rate == direct.terms[l].rate);
        CHECK(viacli.terms[l].amplitude == direct.terms[l].amplitude);
    }

    const Run tag = ws({"tag"});
    REQUIRE(tag.code == 0);
    CHECK(tag.out.find("-> sector 1") != std::string::npos);
    const TaggedModel tagged = io::tagged_from_json(ws.read("tagged.json"));
    CHECK(tagged.terms[0].sector == 1);
    CHECK(test::rel_close(tagged.gap, pi() * pi() / 3, Real(1e-30)));

    REQUIRE(ws({"recover-components"}).code == 0);
    CHECK(ws.read("components.json").find("\"sector\"") != std::string::npos);

    const Run stab = ws({"stability", "--h", "0.05"});
    REQUIRE(stab.code == 0);
    const StabilityReport report = io::stability_from_json(ws.read("stability.json"));
    const StabilityReport want   = stability_report(fx.spec, fx.h);
    CHECK(report.kappa_exp == want.kappa_exp);
    CHECK(report.epsilon0 == want.epsilon0);
}

TEST_CASE("cli: synth and sampling a given model")
{
    Workspace ws("synth");
    REQUIRE(ws({"fixture", "ex5"}).code == 0);
    REQUIRE(ws({"synth"}).code == 0);
    const ExponentialModel m = io::model_from_json(ws.read("model.json"));
    CHECK(m.size() == 4);
    REQUIRE(ws({"sample", "--model", "model.json", "--h", "0.1", "--count", "10",
                "--epsilon", "1e-9", "--seed", "4", "-o", "noisy.csv"})
                .code == 0);
    const SampleWindow w = io::window_from_csv(ws.read("noisy.csv"), ws.read("noisy.json"));
    CHECK(w.size() == 10);
    CHECK(w.seed == std::optional<unsigned long long>(4));
    CHECK(w.noise_level == parse_real("1e-9"));
}

TEST_CASE("cli: a single exponential is recovered to working precision")
{
    Workspace ws("single");
    io::write_file(ws.path("one.json"),
                   R"({"terms": [{"rate": 2.5, "amp_re": 0.75, "amp_im": 0}]})");
    REQUIRE(ws({"sample", "--model", "one.json", "--h", "0.2"}).code == 0);
    REQUIRE(ws({"reconstruct", "--L", "1"}).code == 0);
    const ExponentialModel m = io::model_from_json(ws.read("model.json"));
    REQUIRE(m.size() == 1);
    CHECK(test::close(m.terms[0].rate, Real(5) / 2, Real(1e-32)));
    CHECK(test::close(m.terms[0].amplitude, Complex(Real(3) / 4), Real(1e-32)));
}

TEST_CASE("cli: exit codes")
{
    Workspace ws("codes");
    SUBCASE("unknown fixture and missing input are validation failures")
    {
        const Run r = ws({"fixture", "nope"});
        CHECK(r.code == cli::ValidationFailure);
        CHECK(r.err.find("\"error\"") != std::string::npos);
        CHECK(ws({"synth"}).code == cli::ValidationFailure);
        CHECK(ws({}).code == cli::ValidationFailure);
        CHECK(ws({"sample"}).code == cli::ValidationFailure);
        CHECK(ws({"bogus"}).code == cli::ValidationFailure);
    }
    SUBCASE("too few samples")
    {
        REQUIRE(ws({"fixture", "ex6"}).code == 0);
        REQUIRE(ws({"sample", "--h", "0.05"}).code == 0);
        const Run r = ws({"reconstruct", "--L", "4"});
        CHECK(r.code == cli::ValidationFailure);
        CHECK(r.err.find("InsufficientSamples") != std::string::npos);
    }
    SUBCASE("over-estimated order is a mathematical failure")
    {
        REQUIRE(ws({"fixture", "ex6"}).code == 0);
        REQUIRE(ws({"sample", "--h", "0.05", "--count", "8"}).code == 0);
        const Run r = ws({"reconstruct", "--L", "4"});
        CHECK(r.code == cli::MathematicalFailure);
        CHECK(r.err.find("RankDeficientHankel") != std::string::npos);
        CHECK(r.err.find("\"stage\":\"polynomial\"") != std::string::npos);
    }
    SUBCASE("shared eigenvalues cannot be tagged")
    {
        REQUIRE(ws({"fixture", "example3"}).code == 0);
        REQUIRE(ws({"synth"}).code == 0);
        const Run r = ws({"tag"});
        CHECK(r.code == cli::MathematicalFailure);
        CHECK(r.err.find("AmbiguousTag") != std::string::npos);
    }
    SUBCASE("bad numbers")
    {
        REQUIRE(ws({"fixture", "ex6"}).code == 0);
        CHECK(ws({"sample", "--h", "abc"}).code == cli::ValidationFailure);
        CHECK(ws({"sample", "--h", "-1"}).code == cli::ValidationFailure);
        CHECK(ws({"--tol-eig", "0", "synth"}).code == cli::ValidationFailure);
    }
    SUBCASE("help")
    {
        const Run r = ws({"--help"});
        CHECK(r.code == 0);
        CHECK(r.out.find("reconstruct") != std::string::npos);
    }
}

TEST_CASE("cli: sweeps are reproducible byte for byte")
{
    Workspace ws("sweep");
    REQUIRE(ws({"fixture", "ex6"}).code == 0);
    const std::vector<std::string> args = {"sweep", "--h", "0.05", "--epsilons", "1e-8:1e-6:3",
                                           "--trials", "5", "--seed", "11"};
    const Run a          = ws(args);
    const std::string c1 = ws.read("sweep.csv");
    const Run b          = ws(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(c1 == ws.read("sweep.csv"));
    CHECK(a.out.find("slope") != std::string::npos);
    // header plus 3 levels x 5 trials
    CHECK(std::count(c1.begin(), c1.end(), '\n') == 16);
}

TEST_CASE("cli: noise level lists")
{
    const auto logspaced = cli::parse_epsilons("1e-8:1e-4:5");
    REQUIRE(logspaced.size() == 5);
    CHECK(logspaced.front() == parse_real("1e-8"));
    CHECK(logspaced.back() == parse_real("1e-4"));
    CHECK(test::rel_close(logspaced[2], parse_real("1e-6"), Real(1e-30)));
    const auto list = cli::parse_epsilons("0,0.5,1");
    REQUIRE(list.size() == 3);
    CHECK(list[1] == Real(1) / 2);
    CHECK_THROWS(cli::parse_epsilons("1:2"));
    CHECK_THROWS(cli::parse_epsilons("1e-8:1e-4:0"));
}
