// cmhecke: prime search, L-value runs, verification suites and valuation
// certificates for y^2 = x^3 + D^3 over Q(sqrt -3).
//
// Exit codes: 0 ok, 1 computational error, 2 verification or oracle
// mismatch, 64 usage error.

#include "cmhecke/eisenstein.hpp"
#include "cmhecke/hecke.hpp"
#include "cmhecke/numerics.hpp"
#include "cmhecke/oracle.hpp"
#include "cmhecke/report.hpp"
#include "cmhecke/valuation.hpp"
#include "cmhecke/weierstrass.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

using namespace cmhecke;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitUsage = 64;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int precision = 50;
    std::string primes;
    std::string subset;
    std::string oracle;
    std::string json_path;
    std::string congruence = "12";
    unsigned workers = 0;
    bool timing = false;
    bool escalate = false;
    long norm_bound = 0;
    std::string suite;
};

Congruence parse_congruence(const std::string& s)
{
    if (s == "12") {
        return Congruence::mod12;
    }
    if (s == "4sqrt3" || s == "4sqrt-3") {
        return Congruence::mod4sqrt3;
    }
    throw UsageError("congruence must be 12 or 4sqrt3, got '" + s + "'");
}

SquarefreeD parse_primes(const RunConfig& cfg)
{
    std::vector<EisensteinInt> primes;
    std::string item;
    auto flush = [&] {
        if (item.find_first_not_of(" \t") != std::string::npos) {
            try {
                primes.push_back(parse_eisenstein(item));
            } catch (const std::exception& e) {
                throw UsageError(e.what());
            }
        }
        item.clear();
    };
    for (char ch : cfg.primes) {
        if (ch == ',') {
            flush();
        } else {
            item += ch;
        }
    }
    flush();
    try {
        return SquarefreeD(primes, parse_congruence(cfg.congruence));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

SubsetSelector parse_subset(const RunConfig& cfg, const SquarefreeD& d)
{
    if (cfg.subset.empty()) {
        return SubsetSelector::full(d);
    }
    std::string s = cfg.subset;
    int base = 10;
    if (s.rfind("0b", 0) == 0 || s.rfind("0B", 0) == 0) {
        base = 2;
        s = s.substr(2);
    } else if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) {
        base = 16;
        s = s.substr(2);
    }
    std::size_t used = 0;
    unsigned long mask = 0;
    try {
        mask = std::stoul(s, &used, base);
    } catch (const std::exception&) {
        throw UsageError("malformed subset mask '" + cfg.subset + "'");
    }
    if (used != s.size()) {
        throw UsageError("malformed subset mask '" + cfg.subset + "'");
    }
    try {
        return SubsetSelector(d, static_cast<std::uint32_t>(mask));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

Precision precision_of(const RunConfig& cfg)
{
    if (cfg.precision < Precision::kMinDigits) {
        throw UsageError("precision must be at least " + std::to_string(Precision::kMinDigits) + " digits");
    }
    return Precision{cfg.precision};
}

unsigned workers_of(const RunConfig& cfg)
{
    if (cfg.workers != 0) {
        return cfg.workers;
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

// With --json -, stdout carries only the JSON document and the text report
// goes to stderr.
std::streambuf* json_stdout = nullptr;

void write_json(const RunConfig& cfg, const Json& j)
{
    if (cfg.json_path.empty()) {
        return;
    }
    if (cfg.json_path == "-") {
        std::ostream out(json_stdout);
        out << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(cfg.json_path);
    if (!out) {
        throw std::runtime_error("cannot write " + cfg.json_path);
    }
    out << j.dump(2) << "\n";
}

std::string mark(bool ok) { return ok ? "pass" : "FAIL"; }

void print_checks(const std::vector<CheckResult>& rs)
{
    for (const auto& r : rs) {
        std::cout << "  " << mark(r.passed) << "  " << std::left << std::setw(52) << r.name << "  " << r.measure;
        if (!r.detail.empty()) {
            std::cout << "  (" << r.detail << ")";
        }
        std::cout << "\n";
    }
}

std::size_t count_passed(const std::vector<CheckResult>& rs)
{
    return static_cast<std::size_t>(std::count_if(rs.begin(), rs.end(), [](const CheckResult& r) { return r.passed; }));
}

// ---------------------------------------------------------------------------

int cmd_find_primes(const RunConfig& cfg)
{
    if (cfg.norm_bound < 1 || cfg.norm_bound > 10'000'000) {
        throw UsageError("--norm-bound must be in [1, 10^7]");
    }
    const Congruence flag = parse_congruence(cfg.congruence);
    const auto primes = find_primes(cfg.norm_bound, flag);
    Json rows = Json::array();
    std::cout << "primes = 1 mod " << to_string(flag) << " with norm <= " << cfg.norm_bound << ": " << primes.size() << "\n";
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const auto& pi = primes[i];
        std::optional<std::size_t> partner;
        for (std::size_t j = 0; j < primes.size(); ++j) {
            if (are_associates(primes[j], pi.conj())) {
                partner = j;
                break;
            }
        }
        const std::string conj_text = partner ? to_string(primes[*partner]) : "-";
        std::cout << "  " << std::left << std::setw(14) << to_string(pi) << " norm " << std::setw(9) << pi.norm() << " conjugate "
                  << (partner && *partner == i ? "self" : conj_text) << "\n";
        Json row{{"prime", to_string(pi)}, {"norm", pi.norm()}};
        row["conjugate"] = partner ? Json(to_string(primes[*partner])) : Json(nullptr);
        row["self_conjugate"] = partner && *partner == i;
        rows.push_back(row);
    }
    Json j = envelope("find-primes");
    j["norm_bound"] = cfg.norm_bound;
    j["congruence"] = to_string(flag);
    j["primes"] = rows;
    write_json(cfg, j);
    return kExitOk;
}

BigReal oracle_tolerance(OracleMethod m, const LatticeContext& ctx)
{
    const int p = ctx.precision().digits;
    if (m == OracleMethod::closed_form) {
        return ctx.tolerance(15);
    }
    return pow10(-std::min(p - 15, kOracleDigits - 5), ctx.bits());
}

int cmd_l1(const RunConfig& cfg)
{
    const SquarefreeD d = parse_primes(cfg);
    const SubsetSelector t = parse_subset(cfg, d);
    const Precision p = precision_of(cfg);
    std::optional<OracleMethod> method;
    if (!cfg.oracle.empty()) {
        try {
            method = parse_oracle_method(cfg.oracle);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (*method == OracleMethod::closed_form && !t.is_empty()) {
            throw UsageError("closed-form oracle needs the empty subset");
        }
        if (*method == OracleMethod::curve_q && !t.d_t().is_rational()) {
            throw UsageError("curve-q oracle needs a rational D_T");
        }
    }
    const unsigned workers = workers_of(cfg);

    const LatticeContext ctx(p);
    const FormulaWorkspace ws(d, ctx, workers);
    LValueReport r = formula_l1(ws, t);
    const int digits = p.digits;

    std::cout << "D = " << to_string(r.d) << ", T = " << r.mask << ", D_T = " << to_string(r.d_t) << ", P = " << digits << "\n";
    std::cout << "  classes     " << r.term_count << " (" << r.pole_terms << " at lattice points)\n";
    std::cout << "  sum1        " << r.sum1.re().to_string(digits) << " " << r.sum1.im().to_string(digits) << " i\n";
    std::cout << "  sum2        " << r.sum2 << "\n";
    std::cout << "  L_S         " << r.l_s.re().to_string(digits) << " " << r.l_s.im().to_string(digits) << " i\n";
    std::cout << "  L           " << r.l_adjusted.re().to_string(digits) << " " << r.l_adjusted.im().to_string(digits) << " i\n";

    Json j = envelope("l1");
    int code = kExitOk;
    if (cfg.escalate) {
        const EscalationCheck e = precision_escalation(d, t, p, workers);
        std::cout << "  escalation  P vs P+20: " << e.difference.to_string(3) << " " << mark(e.passed) << "\n";
        j["escalation"] = Json{{"difference", e.difference.to_string(3)}, {"passed", e.passed}};
        if (!e.passed) {
            j["report"] = to_json(r, cfg.timing);
            write_json(cfg, j);
            std::cerr << "precision escalation disagreement\n";
            return kExitCompute;
        }
    }
    if (method) {
        const OracleValue o = oracle_l1(d, t, ctx, *method);
        const BigReal diff = distance(r.l_s, o.l_s);
        const BigReal tol = oracle_tolerance(*method, ctx);
        r.oracle_method = to_string(*method);
        r.oracle_value = o.l_s;
        r.abs_diff = diff;
        const bool ok = diff <= tol;
        std::cout << "  oracle      " << to_string(*method) << " L_S = " << o.l_s.re().to_string(digits) << " "
                  << o.l_s.im().to_string(digits) << " i\n";
        if (o.fit) {
            std::cout << "              root number " << o.fit->root_number.re().to_string(12) << " "
                      << o.fit->root_number.im().to_string(12) << " i, level " << o.fit->conductor << ", " << o.fit->terms
                      << " terms\n";
        }
        std::cout << "  |diff|      " << diff.to_string(3) << " (tolerance " << tol.to_string(1) << ") " << mark(ok) << "\n";
        j["oracle"] = to_json(o, digits);
        j["oracle"]["tolerance"] = tol.to_string(1);
        j["oracle"]["passed"] = ok;
        code = ok ? kExitOk : kExitMismatch;
    }
    j["report"] = to_json(r, cfg.timing);
    write_json(cfg, j);
    return code;
}

int cmd_verify(const RunConfig& cfg)
{
    const Precision p = precision_of(cfg);
    Json j = envelope("verify");
    j["suite"] = cfg.suite;
    j["precision"] = p.digits;
    bool ok = true;
    if (cfg.suite == "special-values") {
        const LatticeContext ctx(p);
        const auto checks = special_value_suite(ctx);
        Json rows = Json::array();
        std::size_t passed = 0;
        for (const auto& c : checks) {
            std::cout << "  " << mark(c.passed) << "  " << std::left << std::setw(64) << c.name << "  " << c.error.to_string(3) << "\n";
            rows.push_back(to_json(c, p.digits));
            passed += c.passed ? 1 : 0;
        }
        ok = passed == checks.size();
        std::cout << passed << "/" << checks.size() << " special values pass at P = " << p.digits << "\n";
        j["omega"] = ctx.omega().to_string(p.digits);
        j["omega_route_difference"] = ctx.omega_routes().disagreement.to_string(3);
        j["checks"] = rows;
    } else if (cfg.suite == "identities") {
        const SquarefreeD d = parse_primes(cfg);
        if (d.size() == 0) {
            throw UsageError("identities need at least one prime");
        }
        const SubsetSelector t = parse_subset(cfg, d);
        const unsigned workers = workers_of(cfg);
        const LatticeContext ctx(p);
        const FormulaWorkspace ws(d, ctx, workers, true);
        const auto checks = identity_checks(ws, t, 20, workers);
        print_checks(checks);
        ok = count_passed(checks) == checks.size();
        std::cout << count_passed(checks) << "/" << checks.size() << " identities pass\n";
        j["primes"] = to_json(d.primes());
        j["subset"] = t.mask();
        j["checks"] = to_json(checks);
    } else if (cfg.suite == "symbols") {
        const SquarefreeD d = parse_primes(cfg);
        const auto checks = symbol_checks(d);
        print_checks(checks);
        ok = count_passed(checks) == checks.size();
        std::cout << count_passed(checks) << "/" << checks.size() << " symbol checks pass\n";
        j["primes"] = to_json(d.primes());
        j["checks"] = to_json(checks);
    } else {
        throw UsageError("unknown suite " + cfg.suite);
    }
    j["passed"] = ok;
    write_json(cfg, j);
    return ok ? kExitOk : kExitMismatch;
}

int cmd_valuation(const RunConfig& cfg)
{
    const SquarefreeD d = parse_primes(cfg);
    if (d.size() == 0) {
        throw UsageError("n = 0: the bound is asserted for n >= 1 only; the exact value is v2(L/omega) = v2(cbrt4/(4 sqrt3)) = " +
                         v2_closed_form_constant().to_string());
    }
    const ValuationCertificate cert = certificate(d);
    const bool ok = cert.all_proved_hold() && recheck(cert);
    for (const auto& s : cert.steps) {
        std::cout << "  " << std::left << std::setw(8) << to_string(s.status) << " " << (s.holds ? "ok  " : "FAIL") << " "
                  << std::setw(16) << s.id << s.claim << "\n            " << s.evidence << "\n";
        if (!s.depends_on.empty()) {
            std::cout << "            depends on:";
            for (const auto& dep : s.depends_on) {
                std::cout << " " << dep;
            }
            std::cout << "\n";
        }
    }
    std::cout << "bound v2(L/omega) >= " << cert.bound.to_string() << ", conditional on";
    for (const auto& c : cert.conditional_on) {
        std::cout << " " << c;
    }
    std::cout << "\n";
    Json j = envelope("valuation");
    j["certificate"] = to_json(cert);
    j["replayed"] = ok;
    write_json(cfg, j);
    return ok ? kExitOk : kExitMismatch;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Special values of Hecke L-series for y^2 = x^3 + D^3 over Q(sqrt -3)"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--precision", cfg.precision, "working precision in decimal digits")->envname("CMHECKE_PRECISION");
        sub->add_option("--json", cfg.json_path, "write a JSON report to this path ('-' for stdout)");
        sub->add_option("--workers", cfg.workers, "worker threads (0 = hardware concurrency)");
        sub->add_flag("--timing", cfg.timing, "include wall time in JSON output");
    };
    auto add_primes = [&](CLI::App* sub) {
        sub->add_option("--primes", cfg.primes, "comma-separated primes, e.g. \"13+12t,1-12t\"; empty for D = 1")->expected(0, 1);
        sub->add_option("--congruence", cfg.congruence, "12 or 4sqrt3");
    };

    auto* find = app.add_subcommand("find-primes", "list admissible primes");
    find->add_option("--norm-bound", cfg.norm_bound, "largest norm")->required();
    find->add_option("--congruence", cfg.congruence, "12 or 4sqrt3");
    find->add_option("--json", cfg.json_path, "write a JSON report to this path");

    auto* l1 = app.add_subcommand("l1", "evaluate L_S(conj psi_{D_T^3}, 1) by the closed formula");
    add_common(l1);
    add_primes(l1);
    l1->add_option("--subset", cfg.subset, "subset mask T (0b.., 0x.. or decimal); default all primes");
    l1->add_option("--oracle", cfg.oracle, "closed-form, curve-q or afe");
    l1->add_flag("--escalate", cfg.escalate, "rerun at P + 20 and compare");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    add_common(verify);
    add_primes(verify);
    verify->add_option("--subset", cfg.subset, "subset mask T; default all primes");
    verify->add_option("suite", cfg.suite, "special-values, identities or symbols")
        ->required()
        ->check(CLI::IsMember({"special-values", "identities", "symbols"}));

    auto* val = app.add_subcommand("valuation", "2-adic valuation certificate");
    add_common(val);
    add_primes(val);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    json_stdout = std::cout.rdbuf();
    if (cfg.json_path == "-") {
        std::cout.rdbuf(std::cerr.rdbuf());
    }

    try {
        if (find->parsed()) {
            return cmd_find_primes(cfg);
        }
        if (l1->parsed()) {
            return cmd_l1(cfg);
        }
        if (verify->parsed()) {
            return cmd_verify(cfg);
        }
        if (val->parsed()) {
            return cmd_valuation(cfg);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCompute;
    }
    return kExitUsage;
}
