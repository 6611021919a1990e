#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "esl/cli.hpp"
#include "esl/errors.hpp"

using namespace esl;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"esl"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("esl_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::size_t count_files(const fs::path& dir) {
    if (!fs::exists(dir)) return 0;
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir)) n += e.is_regular_file();
    return n;
}

}  // namespace

TEST_CASE("vdc balance output") {
    const auto r = run({"vdc", "balance", "--pair", "2/7,1/14"});
    CHECK(r.code == 0);
    CHECK(r.out == "D=N^(5/29)*y^(-9/29) bound=N^(12/29)*y^(-10/29)\n");
}

TEST_CASE("exit codes") {
    CHECK(run({"vdc", "pair", "--pair", "0,1", "--apply", "B,A"}).code == 0);
    CHECK(run({"vdc", "pair", "--pair", "0,1", "--apply", "C"}).code == 1);
    CHECK(run({"vdc", "balance", "--pair", "0,11/8"}).code == 1);
    CHECK(run({"norm", "--N", "100"}).code == 1);
    CHECK(run({"nosuch"}).code == 1);
    CHECK(run({"--oversample", "2", "norm", "--N", "100", "--H", "10"}).code == 1);
    CHECK(run({"--max-fft", "1024", "norm", "--N", "100000", "--H", "1000"}).code == 2);
    CHECK(run({"zeta", "value", "--t", "2e6"}).code == 2);
    const auto fail = run({"scan", "--series", "mobius_squared", "--N", "100000", "--H", "64,128,256", "--verify",
                           "--slope-min", "5", "--slope-max", "6"});
    CHECK(fail.code == 3);
    CHECK(fail.err.find("verification failed") != std::string::npos);
    const auto ok = run({"scan", "--series", "mobius_squared", "--N", "100000", "--H", "64,128,256"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("fit series=mobius_squared N=100000 points=3 slope=") != std::string::npos);
}

TEST_CASE("norm of a squarefree window") {
    // |n - 10| <= 5 has squarefree n in {5,6,7,10,11,13,14,15}.
    const auto r = run({"norm", "--series", "mobius_squared", "--N", "10", "--H", "5", "--no-strict"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\nl2=2.82842712475\n") != std::string::npos);
    const auto strict = run({"norm", "--series", "mobius_squared", "--N", "10", "--H", "5"});
    CHECK(strict.out.find("\nl2=2.44948974278\n") != std::string::npos);
}

TEST_CASE("kernel subcommand") {
    const auto r = run({"kernel", "--type", "gd", "--N", "101", "--H", "21", "--r", "2", "--d", "3", "--samples", "5",
                        "--verify"});
    CHECK(r.code == 0);
    CHECK(r.err.find("odd") != std::string::npos);
    CHECK(run({"kernel", "--type", "fejer_diff", "--N", "50", "--K", "7", "--alpha", "0.1,0.37", "--verify"}).code == 0);
}

TEST_CASE("sieve subcommand") {
    const auto r = run({"sieve", "--kind", "mu", "--lo", "1", "--hi", "6"});
    CHECK(r.out == "n,mu\n1,1\n2,-1\n3,-1\n4,0\n5,-1\n6,1\n");
    const auto c = run({"sieve", "--kind", "cn", "--lo", "1", "--hi", "4", "--y", "1", "--z", "2"});
    CHECK(c.out == "n,cn\n1,0\n2,0\n3,0\n4,-1\n");
}

TEST_CASE("config precedence") {
    cli::Config c = cli::Config::defaults();
    CHECK(c.workers >= 1);
    const auto file = fs::temp_directory_path() / "esl_cli_config.txt";
    {
        std::ofstream f(file);
        f << "# comment\n\noversample = 128\nworkers=2\ncache_dir=/tmp/from_file\n";
    }
    cli::apply_config_file(c, file);
    CHECK(c.oversample == 128);
    CHECK(c.workers == 2);
    CHECK(c.cache_dir == "/tmp/from_file");
    CHECK_THROWS_AS(cli::apply_setting(c, "colour", "red"), ArgumentError);
    CHECK_THROWS_AS(cli::apply_setting(c, "workers", "two"), ArgumentError);
    c.max_fft = 1000;
    CHECK_THROWS_AS(c.validate(), ArgumentError);
    fs::remove(file);

    const auto from_file = fresh_dir("file");
    const auto from_env = fresh_dir("env");
    const auto from_flag = fresh_dir("flag");
    const auto cfg = fs::temp_directory_path() / "esl_cli_config2.txt";
    {
        std::ofstream f(cfg);
        f << "cache_dir=" << from_file.string() << '\n';
    }
    const std::string cfg_s = cfg.string(), flag_s = from_flag.string();
    ::unsetenv("ESL1_CACHE");
    CHECK(run({"--config", cfg_s.c_str(), "sieve", "--lo", "1", "--hi", "50"}).code == 0);
    CHECK(count_files(from_file) == 1);

    ::setenv("ESL1_CACHE", from_env.c_str(), 1);
    CHECK(run({"--config", cfg_s.c_str(), "sieve", "--lo", "1", "--hi", "50"}).code == 0);
    CHECK(count_files(from_env) == 1);
    CHECK(run({"--config", cfg_s.c_str(), "--cache-dir", flag_s.c_str(), "sieve", "--lo", "1", "--hi", "50"}).code == 0);
    CHECK(count_files(from_flag) == 1);

    const auto ls = run({"cache", "ls"});
    CHECK(ls.code == 0);
    CHECK(ls.out.find("mu_") != std::string::npos);
    CHECK(ls.out.find("checksum_ok=true") != std::string::npos);
    const auto entry = (*fs::directory_iterator(from_env)).path().string();
    const auto insp = run({"cache", "inspect", entry.c_str()});
    CHECK(insp.out.find("len=50") != std::string::npos);
    const auto cl = run({"cache", "clear"});
    CHECK(cl.out == "removed=1\n");
    CHECK(count_files(from_env) == 0);
    ::unsetenv("ESL1_CACHE");
    CHECK(run({"cache", "ls"}).code == 1);

    for (const auto& d : {from_file, from_env, from_flag}) fs::remove_all(d);
    fs::remove(cfg);
}
