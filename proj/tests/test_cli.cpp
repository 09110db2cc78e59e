#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch()
{
    const fs::path dir(CURVLAB_SCRATCH);
    fs::create_directories(dir);
    return dir;
}

Run run(const std::string& args)
{
    const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
    const std::string cmd = std::string("\"") + CURVLAB_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string data(const char* name) { return std::string("\"") + CURVLAB_TEST_DATA + "/" + name + "\""; }

}  // namespace

TEST_CASE("analyze exits 0 on catalog inputs")
{
    const Run r = run("analyze catalog:frw_s3 --points 5");
    CHECK(r.code == 0);
    CHECK(r.out.find("conformally_flat") != std::string::npos);
}

TEST_CASE("exit codes for malformed and invalid definitions")
{
    const std::pair<const char*, int> cases[] = {
        {"bad_syntax.metric", 1},      {"bad_expression.metric", 1}, {"unknown_section.metric", 1},
        {"domain_error.metric", 3},    {"degenerate.metric", 3},     {"contact_broken.metric", 2},
        {"even_contact.metric", 2},    {"warping_nonpositive.metric", 2},
    };
    for (const auto& [file, code] : cases) {
        CAPTURE(file);
        const Run r = run("analyze " + data(file) + " --points 5");
        CHECK(r.code == code);
        CHECK_FALSE(r.err.empty());
    }
    CHECK(run("analyze /nonexistent.metric").code == 1);
    CHECK(run("analyze catalog:nope").code == 1);
    CHECK(run("analyze").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("analyze catalog:frw_s3 --points 0").code == 1);
    CHECK(run("--help").code == 0);
}

TEST_CASE("syntax errors name the line")
{
    const Run r = run("analyze " + data("bad_syntax.metric"));
    CHECK(r.err.find("line 11") != std::string::npos);
}

TEST_CASE("verify-paper targets")
{
    const Run ok = run("verify-paper thm1.2 --points 10");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("traced") != std::string::npos);
    CHECK(run("verify-paper eardley --points 10 --format machine").code == 0);
    CHECK(run("verify-paper bogus").code == 1);
}

TEST_CASE("catalog subcommands")
{
    const Run list = run("catalog list");
    CHECK(list.code == 0);
    for (const char* name : {"sphere_4", "frw_s3", "nil3", "kmu_solvable", "pp_wave_4"})
        CHECK(list.out.find(name) != std::string::npos);
    const Run show = run("catalog show nil3");
    CHECK(show.code == 0);
    CHECK(show.out.find("[exact]") != std::string::npos);
    CHECK(show.out.find("[reference]") != std::string::npos);
    CHECK(run("catalog show nope").code == 1);

    const fs::path file = scratch() / "nil3.metric";
    CHECK(run("catalog export nil3 -o \"" + file.string() + "\"").code == 0);
    const Run again = run("analyze \"" + file.string() + "\" --points 5 --format machine");
    CHECK(again.code == 0);
    const Run original = run("analyze catalog:nil3 --points 5 --format machine");
    CHECK(nlohmann::json::parse(again.out)["input"]["digest"] == nlohmann::json::parse(original.out)["input"]["digest"]);
}

TEST_CASE("machine output is byte-identical across runs and thread counts")
{
    const Run a = run("analyze catalog:warped_s2xs2 --points 8 --format machine --threads 1");
    const Run b = run("analyze catalog:warped_s2xs2 --points 8 --format machine --threads 1");
    const Run c = run("analyze catalog:warped_s2xs2 --points 8 --format machine --threads 3");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    const fs::path file = scratch() / "report.json";
    CHECK(run("analyze catalog:warped_s2xs2 --points 8 --format machine -o \"" + file.string() + "\"").code == 0);
    CHECK(slurp(file) == a.out);
}

TEST_CASE("command line overrides the file's analysis stanza, which overrides defaults")
{
    const fs::path file = scratch() / "stanza.metric";
    {
        std::string text = run("catalog export s2xs2").out;
        text += "\n[analysis]\nseed = 9\npoints = 4\ntol_theorem = 1e-5\n";
        std::ofstream(file) << text;
    }
    const auto settings = [&](const std::string& extra) {
        const Run r = run("analyze \"" + file.string() + "\" --format machine " + extra);
        REQUIRE(r.code == 0);
        return nlohmann::json::parse(r.out)["settings"];
    };
    const auto from_file = settings("");
    CHECK(from_file["seed"] == 9);
    CHECK(from_file["points"] == 4);
    CHECK(from_file["seed_source"] == "file");
    CHECK(from_file["tolerances"]["theorem"] == 1e-5);
    CHECK(from_file["tolerances"]["derived"] == 1e-8);

    const auto from_cli = settings("--seed 3 --points 2 --tol-theorem 1e-4");
    CHECK(from_cli["seed"] == 3);
    CHECK(from_cli["points"] == 2);
    CHECK(from_cli["seed_source"] == "command line");
    CHECK(from_cli["tolerances"]["theorem"] == 1e-4);

    const Run plain = run("analyze catalog:s2xs2 --points 2 --format machine");
    const auto defaults = nlohmann::json::parse(plain.out)["settings"];
    CHECK(defaults["seed"] == 0);
    CHECK(defaults["seed_source"] == "default");
    CHECK(defaults["tolerance_source"] == "default");
}
