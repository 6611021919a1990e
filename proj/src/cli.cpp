#include "esl/cli.hpp"

#include <CLI11.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "esl/analytic.hpp"
#include "esl/cache.hpp"
#include "esl/errors.hpp"
#include "esl/experiments.hpp"
#include "esl/kernels.hpp"
#include "esl/parallel.hpp"
#include "esl/sieve.hpp"
#include "esl/torus.hpp"
#include "esl/vdc.hpp"

namespace esl::cli {

namespace {

struct VerificationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string fmt(std::complex<double> z) { return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i"; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ArgumentError("bad value '" + std::string(value) + "' for " + std::string(key));
    return out;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw VerificationFailed("verification failed: " + what);
}

std::int64_t even_or_warn(std::int64_t v, const char* name, std::ostream& err) {
    const auto e = kernels::round_up_even(v);
    if (e != v) err << "warning: " << name << "=" << v << " is odd; using " << e << '\n';
    return e;
}

std::string exponent_term(const char* base, const vdc::Rational& e) {
    return std::string(base) + "^(" + vdc::to_string(e) + ")";
}

}  // namespace

Config Config::defaults() {
    Config c;
    c.workers = default_workers();
    return c;
}

void Config::validate() const {
    if (oversample < 4) throw ArgumentError("oversample must be >= 4");
    if (max_fft == 0 || !std::has_single_bit(max_fft)) throw ArgumentError("max_fft must be a power of two");
    if (workers < 1) throw ArgumentError("workers must be >= 1");
    if (sieve_segment < 64) throw ArgumentError("sieve_segment must be >= 64");
}

void apply_setting(Config& config, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "cache_dir") config.cache_dir = std::string(value);
    else if (key == "oversample") config.oversample = parse_number<int>(key, value);
    else if (key == "max_fft") config.max_fft = parse_number<std::size_t>(key, value);
    else if (key == "workers") config.workers = parse_number<unsigned>(key, value);
    else if (key == "sieve_segment") config.sieve_segment = parse_number<std::size_t>(key, value);
    else throw ArgumentError("unknown config key '" + std::string(key) + "'");
}

void apply_config_file(Config& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot read config file " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos)
            throw ArgumentError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        apply_setting(config, t.substr(0, eq), t.substr(eq + 1));
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exponential sums over r-free numbers and the Mobius function: sieves, L1 norms, kernels and checks",
                 "esl"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, cache_dir;
    int oversample = 64;
    std::size_t max_fft = 0, sieve_segment = 0;
    unsigned workers = 1;
    app.add_option("--config", config_path, "key=value config file");
    auto* o_cache = app.add_option("--cache-dir", cache_dir, "segment cache directory");
    auto* o_over = app.add_option("--oversample", oversample, "quadrature oversampling factor (>= 4)");
    auto* o_fft = app.add_option("--max-fft", max_fft, "largest quadrature grid (power of two)");
    auto* o_workers = app.add_option("--workers", workers, "worker threads");
    auto* o_seg = app.add_option("--sieve-segment", sieve_segment, "sieve segment length");

    // sieve
    auto* sieve = app.add_subcommand("sieve", "sieve mu, r-free indicator or c_n(y,z) over [lo, hi] to CSV");
    std::string sieve_kind = "mu", sieve_out;
    std::uint64_t sieve_lo = 1, sieve_hi = 100;
    int sieve_r = 2;
    double sieve_y = 1, sieve_z = 2;
    sieve->add_option("--kind", sieve_kind, "mu | rfree | cn")->check(CLI::IsMember({"mu", "rfree", "cn"}));
    sieve->add_option("--lo", sieve_lo)->required();
    sieve->add_option("--hi", sieve_hi)->required();
    sieve->add_option("--r", sieve_r);
    sieve->add_option("--y", sieve_y);
    sieve->add_option("--z", sieve_z);
    sieve->add_option("--out", sieve_out, "CSV path (default stdout)");

    // norm
    auto* norm = app.add_subcommand("norm", "L1, L2 and sup norms of a series window");
    std::string norm_series = "mobius";
    int norm_r = 2;
    std::int64_t norm_N = 0, norm_H = 0;
    bool norm_strict = true;
    norm->add_option("--series", norm_series, "mobius | mobius_squared | rfree");
    norm->add_option("--r", norm_r);
    norm->add_option("--N", norm_N)->required();
    norm->add_option("--H", norm_H)->required();
    norm->add_flag("--strict,!--no-strict", norm_strict, "|n-N| < H (default) or |n-N| <= H");

    // kernel
    auto* kernel = app.add_subcommand("kernel", "compare closed form and direct sum of a kernel");
    std::string kernel_type = "fejer_short";
    std::int64_t k_N = 64, k_H = 16, k_K = 8, k_q = 3, k_d = 2;
    int k_r = 2, k_samples = 0;
    std::uint64_t k_seed = 1;
    std::vector<double> k_alpha;
    bool k_verify = false;
    kernel->add_option("--type", kernel_type, "fejer | fejer_short | fejer_diff | q_analog | gd")
        ->check(CLI::IsMember({"fejer", "fejer_short", "fejer_diff", "q_analog", "gd"}));
    kernel->add_option("--N", k_N);
    kernel->add_option("--H", k_H);
    kernel->add_option("--K", k_K);
    kernel->add_option("--q", k_q);
    kernel->add_option("--r", k_r);
    kernel->add_option("--d", k_d);
    kernel->add_option("--alpha", k_alpha)->delimiter(',');
    kernel->add_option("--samples", k_samples, "random alpha spot checks");
    kernel->add_option("--rng-seed", k_seed);
    kernel->add_flag("--verify", k_verify, "exit 3 unless closed form and direct sum agree to 1e-8 * scale");

    // cn-moment
    auto* cnm = app.add_subcommand("cn-moment", "sum of c_n(y,z)^2 against its bounds");
    std::vector<std::int64_t> cnm_N{100000, 1000000, 10000000};
    int cnm_r = 2;
    double cnm_kappa = 0.6;
    bool cnm_verify = false;
    cnm->add_option("--N", cnm_N)->delimiter(',');
    cnm->add_option("--r", cnm_r);
    cnm->add_option("--kappa", cnm_kappa, "K = floor(N^kappa)");
    cnm->add_flag("--verify", cnm_verify, "exit 3 unless ratio(last N) <= 2 ratio(first N)");

    // scan
    auto* scan = app.add_subcommand("scan", "L1 scaling scan with an exponent fit");
    std::string scan_series = "mobius", scan_out, scan_fit_out;
    int scan_r = 2;
    std::int64_t scan_N = 0;
    std::vector<std::int64_t> scan_H;
    bool scan_strict = true, scan_verify = false;
    double slope_min = -1e300, slope_max = 1e300;
    scan->add_option("--series", scan_series);
    scan->add_option("--r", scan_r);
    scan->add_option("--N", scan_N)->required();
    scan->add_option("--H", scan_H)->delimiter(',')->required();
    scan->add_flag("--strict,!--no-strict", scan_strict);
    scan->add_option("--out", scan_out, "append records to this CSV");
    scan->add_option("--fit-out", scan_fit_out, "append the fit to this CSV");
    scan->add_option("--slope-min", slope_min);
    scan->add_option("--slope-max", slope_max);
    scan->add_flag("--verify", scan_verify, "exit 3 unless the fitted slope lies in [slope-min, slope-max]");

    // lower
    auto* lower = app.add_subcommand("lower", "lower-bound machinery: b_d, Y_d sets, g2, quasi-orthogonality");
    std::int64_t lo_N = 10000, lo_H = 1024;
    int lo_r = 2;
    double lo_eps = 0.1;
    bool lo_verify = false;
    lower->add_option("--N", lo_N);
    lower->add_option("--H", lo_H);
    lower->add_option("--r", lo_r);
    lower->add_option("--eps", lo_eps);
    lower->add_flag("--verify", lo_verify, "exit 3 on b_d range, Y_d collisions or centre bound failure");

    // upper
    auto* upper = app.add_subcommand("upper", "upper-bound decomposition into smoothed pieces and tails");
    std::int64_t up_N = 1000000, up_H = 16384;
    int up_r = 2, up_samples = 1000;
    std::uint64_t up_seed = 1;
    bool up_verify = false;
    upper->add_option("--N", up_N);
    upper->add_option("--H", up_H);
    upper->add_option("--r", up_r);
    upper->add_option("--samples", up_samples, "random (d, M, alpha) checks of the progression bound");
    upper->add_option("--rng-seed", up_seed);
    upper->add_flag("--verify", up_verify, "exit 3 unless reconstruction is exact and the constant is <= 4");

    // vdc
    auto* vdc_cmd = app.add_subcommand("vdc", "exponent pairs, psi sums, balance, hyperbola split");
    vdc_cmd->require_subcommand(1);
    std::string pair_text = "2/7,1/14";
    auto* v_balance = vdc_cmd->add_subcommand("balance", "balance the van der Corput term against N^(1/2) y^(-1/2) D^(-1/2)");
    v_balance->add_option("--pair", pair_text);
    auto* v_pair = vdc_cmd->add_subcommand("pair", "apply A/B processes to a pair");
    std::vector<std::string> processes;
    v_pair->add_option("--pair", pair_text);
    v_pair->add_option("--apply", processes, "sequence of A and B")->delimiter(',');
    auto* v_psi = vdc_cmd->add_subcommand("psi", "exact psi sum against the van der Corput bound");
    std::string psi_shape = "inverse-square";
    std::int64_t psi_N = 1000000, psi_c = 1, psi_a = 1, psi_b = 100;
    double psi_eps = 0.01;
    v_psi->add_option("--shape", psi_shape)->check(CLI::IsMember({"inverse-square", "sqrt-inverse"}));
    v_psi->add_option("--N", psi_N);
    v_psi->add_option("--c", psi_c);
    v_psi->add_option("--a", psi_a);
    v_psi->add_option("--b", psi_b);
    v_psi->add_option("--pair", pair_text);
    v_psi->add_option("--eps", psi_eps);
    auto* v_bound = vdc_cmd->add_subcommand("bound", "F^(p/(p+1)) M^((1+2q)/(2(p+1))+eps)");
    double b_F = 1, b_M = 1, b_eps = 0;
    v_bound->add_option("--pair", pair_text);
    v_bound->add_option("--F", b_F)->required();
    v_bound->add_option("--M", b_M)->required();
    v_bound->add_option("--eps", b_eps);
    auto* v_split = vdc_cmd->add_subcommand("split", "hyperbola split counts");
    std::int64_t s_N = 1000, s_K = 100, s_d1 = 1, s_d2 = 1;
    double s_y = 1, s_z = 31;
    v_split->add_option("--N", s_N);
    v_split->add_option("--K", s_K);
    v_split->add_option("--d1", s_d1);
    v_split->add_option("--d2", s_d2);
    v_split->add_option("--y", s_y);
    v_split->add_option("--z", s_z);

    // zeta
    auto* zeta_cmd = app.add_subcommand("zeta", "zeta values, second moment and growth");
    zeta_cmd->require_subcommand(1);
    auto* z_value = zeta_cmd->add_subcommand("value", "zeta(sigma + it)");
    double z_sigma = 0.5, z_t = 0, z_T = 100, z_step = 0.01, z_eps = 0.05, z_window = 0;
    z_value->add_option("--sigma", z_sigma);
    z_value->add_option("--t", z_t);
    auto* z_moment = zeta_cmd->add_subcommand("moment", "integral of |zeta(1/2+it)|^2 over [-T, T]");
    z_moment->add_option("--T", z_T);
    z_moment->add_option("--step", z_step);
    auto* z_growth = zeta_cmd->add_subcommand("growth", "|zeta(sigma+it)| against t^((1-sigma)/3+eps)");
    z_growth->add_option("--sigma", z_sigma);
    z_growth->add_option("--t", z_t)->required();
    z_growth->add_option("--eps", z_eps);
    z_growth->add_option("--window", z_window, "take the max of |zeta| over [t, t+window]");

    // cache
    auto* cache_cmd = app.add_subcommand("cache", "inspect or clear the segment cache");
    cache_cmd->require_subcommand(1);
    auto* c_ls = cache_cmd->add_subcommand("ls", "list cached segments");
    auto* c_clear = cache_cmd->add_subcommand("clear", "remove cached segments");
    auto* c_inspect = cache_cmd->add_subcommand("inspect", "print a segment file header");
    std::string inspect_path;
    c_inspect->add_option("file", inspect_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        Config config = Config::defaults();
        if (!config_path.empty()) apply_config_file(config, config_path);
        if (const char* env = std::getenv("ESL1_CACHE"); env && *env) config.cache_dir = env;
        if (o_cache->count()) config.cache_dir = cache_dir;
        if (o_over->count()) config.oversample = oversample;
        if (o_fft->count()) config.max_fft = max_fft;
        if (o_workers->count()) config.workers = workers;
        if (o_seg->count()) config.sieve_segment = sieve_segment;
        config.validate();

        std::unique_ptr<SegmentCache> cache;
        if (!config.cache_dir.empty() && !cache_cmd->parsed()) cache = std::make_unique<SegmentCache>(config.cache_dir);

        experiments::RunOptions run_opts;
        run_opts.quad.oversample = config.oversample;
        run_opts.quad.max_fft = config.max_fft;
        run_opts.quad.workers = config.workers;
        run_opts.sieve.segment_size = config.sieve_segment;
        run_opts.sieve.workers = config.workers;
        run_opts.cache = cache.get();

        if (sieve->parsed()) {
            const Window w = Window::make(sieve_lo, sieve_hi);
            std::ofstream file;
            if (!sieve_out.empty()) {
                file.open(sieve_out);
                if (!file) throw IoError("cannot open " + sieve_out + " for writing");
            }
            std::ostream& o = sieve_out.empty() ? out : file;
            if (sieve_kind == "mu") {
                const auto seg = mobius_cached(cache.get(), w, run_opts.sieve);
                o << "n,mu\n";
                for (auto n = w.lo; n <= w.hi; ++n) o << n << ',' << seg.at(n) << '\n';
            } else if (sieve_kind == "rfree") {
                const auto seg = rfree_cached(cache.get(), w, sieve_r, run_opts.sieve);
                o << "n,rfree\n";
                for (auto n = w.lo; n <= w.hi; ++n) o << n << ',' << (seg.at(n) ? 1 : 0) << '\n';
            } else {
                const auto seg = cn_cached(cache.get(), w, sieve_r, sieve_y, sieve_z, run_opts.sieve);
                o << "n,cn\n";
                for (auto n = w.lo; n <= w.hi; ++n) o << n << ',' << seg.at(n) << '\n';
            }
            if (file.is_open() && !file) throw IoError("write to " + sieve_out + " failed");
            return 0;
        }

        if (norm->parsed()) {
            const auto series = experiments::Series::parse(norm_series, norm_r);
            if (norm_H < 0 || norm_N < 1) throw ArgumentError("need N >= 1 and H >= 0");
            const Window w = Window::make(static_cast<std::uint64_t>(std::max<std::int64_t>(1, norm_N - norm_H)),
                                          static_cast<std::uint64_t>(norm_N + norm_H));
            TrigPoly poly = series.kind == experiments::SeriesKind::Mobius
                                ? from_segment(mobius_cached(cache.get(), w, run_opts.sieve), norm_N, norm_H, norm_strict)
                                : from_segment(rfree_cached(cache.get(), w, series.r, run_opts.sieve), norm_N, norm_H,
                                               norm_strict);
            const GridNorms g = grid_norms(poly, run_opts.quad);
            out << "series=" << series.name() << "\nN=" << norm_N << "\nH=" << norm_H
                << "\nstrict=" << (norm_strict ? "true" : "false") << "\nl1=" << fmt(g.l1)
                << "\nl1_err=" << fmt(g.l1 * g.rel_error_bound) << "\nl2=" << fmt(l2_norm(poly))
                << "\nl2_grid=" << fmt(std::sqrt(g.l2_squared)) << "\nlinf=" << fmt(g.linf)
                << "\nsamples=" << g.samples << '\n';
            return 0;
        }

        if (kernel->parsed()) {
            kernels::KernelSpec spec;
            if (kernel_type == "fejer") {
                spec = kernels::fejer(k_N);
            } else if (kernel_type == "fejer_diff") {
                spec = kernels::fejer_diff(k_N, k_K);
            } else {
                const auto N = even_or_warn(k_N, "N", err);
                const auto H = even_or_warn(k_H, "H", err);
                if (kernel_type == "fejer_short") spec = kernels::fejer_short(N, H);
                else if (kernel_type == "q_analog") spec = kernels::q_analog(N, H, k_q);
                else spec = kernels::gd(N, H, k_r, k_d);
            }
            std::vector<double> alphas = k_alpha;
            std::mt19937_64 rng(k_seed);
            std::uniform_real_distribution<double> unif(0, 1);
            for (int i = 0; i < k_samples; ++i) alphas.push_back(unif(rng));
            if (alphas.empty()) alphas.push_back(0.0);
            const double scale = kernels::scale(spec);
            double worst = 0;
            out << "scale=" << fmt(scale) << '\n';
            for (double a : alphas) {
                const auto closed = kernels::eval(spec, a);
                const auto direct = kernels::eval_direct(spec, a);
                const double diff = std::abs(closed - direct);
                worst = std::max(worst, diff);
                out << "alpha=" << fmt(a) << " closed=" << fmt(closed) << " direct=" << fmt(direct)
                    << " abs_diff=" << fmt(diff) << '\n';
            }
            out << "max_abs_diff=" << fmt(worst) << '\n';
            if (k_verify) require(worst <= 1e-8 * scale, "closed form differs from direct sum by " + fmt(worst));
            return 0;
        }

        if (cnm->parsed()) {
            const auto rep = experiments::verify_lemma_key(cnm_N, cnm_r, cnm_kappa, run_opts);
            experiments::write_key_values(rep.key_values(), out);
            if (cnm_verify) {
                for (const auto& row : rep.rows)
                    require(std::isfinite(row.ratio_general), "non-finite ratio at N=" + std::to_string(row.N));
                require(rep.ratio_trend <= 2, "ratio trend " + fmt(rep.ratio_trend) + " exceeds 2");
            }
            return 0;
        }

        if (scan->parsed()) {
            const auto series = experiments::Series::parse(scan_series, scan_r);
            const auto rep = experiments::scan_l1(series, scan_N, scan_H, scan_strict, run_opts);
            for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
            experiments::write_csv(rep.records, out);
            if (!scan_out.empty()) experiments::emit_csv(rep.records, scan_out);
            if (rep.records.size() >= 3) {
                const auto fit = experiments::fit_exponent(rep.records);
                out << "fit series=" << series.name() << " N=" << scan_N << " points=" << fit.points
                    << " slope=" << fmt(fit.slope) << " intercept=" << fmt(fit.intercept)
                    << " r_squared=" << fmt(fit.r_squared) << '\n';
                if (!scan_fit_out.empty()) experiments::emit_csv(std::vector{fit}, scan_fit_out);
                if (scan_verify)
                    require(fit.slope >= slope_min && fit.slope <= slope_max,
                            "slope " + fmt(fit.slope) + " outside [" + fmt(slope_min) + ", " + fmt(slope_max) + "]");
            } else if (scan_verify) {
                throw ArgumentError("--verify needs at least 3 H values");
            }
            return 0;
        }

        if (lower->parsed()) {
            const auto N = even_or_warn(lo_N, "N", err);
            const auto H = even_or_warn(lo_H, "H", err);
            const auto rep = experiments::verify_lower_bound_machinery(N, H, lo_r, lo_eps, run_opts);
            experiments::write_key_values(rep.key_values(), out);
            if (lo_verify) {
                require(rep.b_in_range, "some b_d lies outside [1/3, 5/3]");
                require(rep.collisions == 0, std::to_string(rep.collisions) + " samples lie in two Y_d");
                require(rep.center_min_small >= 0.4, "|G_d| at an X_d centre is below 0.4 H/d^r");
            }
            return 0;
        }

        if (upper->parsed()) {
            const auto rep = experiments::verify_upper_bound_decomposition(up_N, up_H, up_r, up_samples, up_seed, run_opts);
            for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
            experiments::write_key_values(rep.key_values(), out);
            if (up_verify) {
                require(rep.reconstruction_exact, "decomposition does not reconstruct a_n");
                require(rep.lemma_max_constant <= 4, "progression bound constant " + fmt(rep.lemma_max_constant) + " > 4");
            }
            return 0;
        }

        if (vdc_cmd->parsed()) {
            const auto pair = vdc::parse_pair(pair_text);
            if (v_balance->parsed()) {
                const auto b = vdc::balance_exponents(pair);
                out << "D=" << exponent_term("N", b.D_N) << '*' << exponent_term("y", b.D_y)
                    << " bound=" << exponent_term("N", b.result_N) << '*' << exponent_term("y", b.result_y) << '\n';
            } else if (v_pair->parsed()) {
                auto p = pair;
                for (const auto& step : processes) {
                    if (step == "A") p = vdc::process_A(p);
                    else if (step == "B") p = vdc::process_B(p);
                    else throw ArgumentError("unknown process '" + step + "' (A or B)");
                }
                out << "pair=" << vdc::to_string(p) << "\nclassical=" << (p.is_classical() ? "true" : "false")
                    << "\ncorput_constraint=" << (p.corput_constraint() ? "true" : "false") << '\n';
            } else if (v_psi->parsed()) {
                vdc::PsiSumSpec spec;
                if (psi_shape == "inverse-square") spec.shape = vdc::InverseSquare{psi_N, psi_c};
                else spec.shape = vdc::SqrtInverse{psi_N, psi_c};
                spec.a = psi_a;
                spec.b = psi_b;
                const double sum = vdc::psi_sum(spec);
                const double F = vdc::psi_sum_F(spec);
                const double M = static_cast<double>(psi_b - psi_a + 1);
                out << "psi_sum=" << fmt(sum) << "\nF=" << fmt(F) << "\nM=" << fmt(M) << '\n';
                if (F >= M) {
                    const double bound = vdc::vdc_bound(pair, F, M, psi_eps);
                    out << "bound=" << fmt(bound) << "\nratio=" << fmt(std::abs(sum) / bound) << '\n';
                } else {
                    out << "bound=n/a (F < M)\n";
                }
            } else if (v_bound->parsed()) {
                out << "bound=" << fmt(vdc::vdc_bound(pair, b_F, b_M, b_eps)) << '\n';
            } else if (v_split->parsed()) {
                const auto s = vdc::hyperbola_split(s_N, s_K, s_d1, s_d2, s_y, s_z);
                out << "sigma1=" << s.sigma1 << "\nsigma2=" << s.sigma2 << "\ndirect=" << s.direct
                    << "\ncut=" << s.cut << "\ndeficit=" << (s.sigma1 + s.sigma2 - s.direct) << '\n';
            }
            return 0;
        }

        if (zeta_cmd->parsed()) {
            if (z_value->parsed()) {
                const auto v = z_sigma == 0.5 ? analytic::zeta_critical(z_t) : analytic::zeta({z_sigma, z_t});
                out << "re=" << fmt(v.real()) << "\nim=" << fmt(v.imag()) << "\nabs=" << fmt(std::abs(v)) << '\n';
            } else if (z_moment->parsed()) {
                const double v = analytic::zeta_second_moment(z_T, z_step, config.workers);
                out << "value=" << fmt(v) << "\nratio=" << fmt(v / (z_T * std::log(z_T))) << '\n';
            } else if (z_growth->parsed()) {
                const auto g = z_window > 0 ? analytic::zeta_growth_sup(z_sigma, z_t, z_eps, z_window)
                                            : analytic::zeta_growth_check(z_sigma, z_t, z_eps);
                out << "value=" << fmt(g.value) << "\nbound=" << fmt(g.bound) << "\nratio=" << fmt(g.value / g.bound)
                    << '\n';
            }
            return 0;
        }

        if (cache_cmd->parsed()) {
            if (c_inspect->parsed()) {
                const auto h = inspect_segment(inspect_path);
                if (!h) throw IoError(inspect_path + " is not a readable segment file");
                out << "version=" << int(h->version) << "\ntype=" << int(static_cast<std::uint8_t>(h->type))
                    << "\nr=" << h->r << "\nlo=" << h->lo << "\nlen=" << h->len
                    << "\nchecksum_ok=" << (h->checksum_ok ? "true" : "false") << '\n';
                return 0;
            }
            if (config.cache_dir.empty()) throw ArgumentError("no cache directory (use --cache-dir or ESL1_CACHE)");
            const SegmentCache c(config.cache_dir);
            if (c_ls->parsed()) {
                for (const auto& p : c.entries()) {
                    const auto h = inspect_segment(p);
                    out << p.filename().string();
                    if (h) out << " r=" << h->r << " lo=" << h->lo << " len=" << h->len
                               << " checksum_ok=" << (h->checksum_ok ? "true" : "false");
                    else out << " unreadable";
                    out << '\n';
                }
            } else if (c_clear->parsed()) {
                out << "removed=" << c.clear() << '\n';
            }
            return 0;
        }
        return 0;
    } catch (const VerificationFailed& e) {
        err << e.what() << '\n';
        return 3;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const ArithmeticError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const CacheMiss& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace esl::cli
