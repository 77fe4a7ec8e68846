#pragma once

// JSON serialization of reports. Numbers computed at working precision are
// written as decimal strings; nothing that depends on the machine (timing,
// worker count) is written unless asked for.

#include "cmhecke/eisenstein.hpp"
#include "cmhecke/hecke.hpp"
#include "cmhecke/numerics.hpp"
#include "cmhecke/oracle.hpp"
#include "cmhecke/valuation.hpp"
#include "cmhecke/weierstrass.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace cmhecke {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json to_json(const BigReal& x, int digits) { return x.to_string(digits); }

inline Json to_json(const BigComplex& z, int digits)
{
    return Json{{"re", z.re().to_string(digits)}, {"im", z.im().to_string(digits)}};
}

inline Json to_json(const EisensteinInt& x) { return to_string(x); }

inline Json to_json(const UnitRoot& u) { return Json{{"sign", u.negative() ? -1 : 1}, {"tau_exp", u.tau_exp()}}; }

inline Json to_json(const std::vector<EisensteinInt>& xs)
{
    Json out = Json::array();
    for (const auto& x : xs) {
        out.push_back(to_string(x));
    }
    return out;
}

inline Json to_json(const CheckResult& r)
{
    Json j{{"name", r.name}, {"passed", r.passed}, {"measure", r.measure}};
    if (!r.detail.empty()) {
        j["detail"] = r.detail;
    }
    return j;
}

inline Json to_json(const std::vector<CheckResult>& rs)
{
    Json out = Json::array();
    for (const auto& r : rs) {
        out.push_back(to_json(r));
    }
    return out;
}

inline Json to_json(const SpecialValueCheck& c, int digits)
{
    return Json{{"name", c.name},
                {"computed", to_json(c.computed, digits)},
                {"expected", to_json(c.expected, digits)},
                {"error", c.error.to_string(3)},
                {"passed", c.passed}};
}

inline Json envelope(const std::string& command)
{
    return Json{{"schema", kSchemaVersion}, {"command", command}};
}

inline Json to_json(const LValueReport& r, bool with_timing = false)
{
    const int digits = r.precision;
    Json j{{"primes", to_json(r.primes)},
           {"D", to_json(r.d)},
           {"subset", r.mask},
           {"D_T", to_json(r.d_t)},
           {"precision", r.precision},
           {"term_count", r.term_count},
           {"pole_terms", r.pole_terms},
           {"two_symbol", to_json(UnitRoot::from_sign(r.two_symbol))},
           {"sum1", to_json(r.sum1, digits)},
           {"sum2", r.sum2},
           {"L_S", to_json(r.l_s, digits)},
           {"L", to_json(r.l_adjusted, digits)}};
    if (r.oracle_method) {
        j["oracle_method"] = *r.oracle_method;
    }
    if (r.oracle_value) {
        j["oracle_value"] = to_json(*r.oracle_value, digits);
    }
    if (r.abs_diff) {
        j["abs_diff"] = r.abs_diff->to_string(3);
    }
    if (with_timing && r.wall_time) {
        j["wall_time"] = *r.wall_time;
    }
    return j;
}

inline Json to_json(const OracleValue& o, int digits)
{
    Json j{{"method", to_string(o.method)}, {"L", to_json(o.l, digits)}, {"L_S", to_json(o.l_s, digits)}};
    if (o.fit) {
        j["root_number"] = to_json(o.fit->root_number, 15);
        j["conductor"] = o.fit->conductor;
        j["terms"] = o.fit->terms;
        j["smoothing_check"] = o.fit->check_error.to_string(3);
    }
    return j;
}

inline Json to_json(const ValuationCertificate& c)
{
    Json primes = Json::array();
    for (const auto& pv : c.per_prime) {
        primes.push_back(Json{{"prime", to_string(pv.prime)},
                              {"norm", pv.norm},
                              {"v2_pi_minus_1", pv.v2_pi_minus_1.to_string()},
                              {"v2_norm_minus_1", pv.v2_norm_minus_1.to_string()},
                              {"v2_pi_plus_1", pv.v2_pi_plus_1.to_string()}});
    }
    Json steps = Json::array();
    for (const auto& s : c.steps) {
        steps.push_back(Json{{"id", s.id},
                             {"claim", s.claim},
                             {"status", to_string(s.status)},
                             {"evidence", s.evidence},
                             {"depends_on", s.depends_on},
                             {"holds", s.holds}});
    }
    return Json{{"n", c.n},
                {"primes", to_json(c.primes)},
                {"congruence", to_string(c.flag)},
                {"per_prime", primes},
                {"class_count", c.class_count},
                {"v2_class_count", c.v2_class_count.to_string()},
                {"all_plus_classes", c.all_plus_classes},
                {"subset_sum_total", c.subset_sum_total},
                {"steps", steps},
                {"bound", c.bound.to_string()},
                {"conditional_on", c.conditional_on}};
}

} // namespace cmhecke
