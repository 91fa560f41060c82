#pragma once

// Serialization and text parsing shared by the CLI and the test suites:
// state JSON ({"two_j": N, "re": [...], "im": [...]}, descending m), sweep
// CSV/JSON (schema "format": 1), angle expressions with pi literals, grid
// specs start:stop:count, and inline amplitude lists.

#include "rotosense/search.hpp"
#include "rotosense/spin.hpp"
#include "rotosense/state.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rotosense {

/// 12 significant digits, '.' decimal separator.
inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// state JSON

inline nlohmann::json state_to_json(const SpinState& state)
{
    nlohmann::json j;
    j["two_j"] = state.spin().two_j();
    auto& re = j["re"] = nlohmann::json::array();
    auto& im = j["im"] = nlohmann::json::array();
    for (int i = 0; i < state.spin().dimension(); ++i) {
        re.push_back(state.amps()(i).real());
        im.push_back(state.amps()(i).imag());
    }
    return j;
}

inline SpinState state_from_json(const nlohmann::json& j)
{
    if (!j.contains("two_j") || !j.contains("re") || !j.contains("im"))
        throw std::invalid_argument("state_from_json: need keys two_j, re, im");
    const Spin spin(j.at("two_j").get<int>());
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if ((int)re.size() != spin.dimension() || (int)im.size() != spin.dimension())
        throw std::invalid_argument("state_from_json: re/im must have 2j+1 entries");
    Eigen::VectorXcd a(spin.dimension());
    for (int i = 0; i < spin.dimension(); ++i) a(i) = std::complex<double>(re[i], im[i]);
    return SpinState(spin, std::move(a));
}

// ---------------------------------------------------------------------------
// sweep output

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records)
{
    if (records.empty()) return;
    const int fl = records.front().profile.j.floor_j();
    os << "eta,best_value";
    for (int t = 1; t <= fl; ++t) os << ",A_" << t;
    os << ",restarts_hitting_best\n";
    for (const auto& r : records) {
        os << format_number(r.eta) << ',' << format_number(r.best_value);
        for (double a : r.profile.measures) os << ',' << format_number(a);
        os << ',' << r.restarts_hitting_best << '\n';
    }
}

inline nlohmann::json sweep_to_json(const std::vector<SweepRecord>& records,
                                    const std::vector<SweepTransition>& transitions = {})
{
    nlohmann::json out;
    out["format"] = 1;
    if (!records.empty()) {
        out["two_j"] = records.front().profile.j.two_j();
        out["j"]     = records.front().profile.j.str();
    }
    auto& recs = out["records"] = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json e;
        e["eta"]                   = r.eta;
        e["best_value"]            = r.best_value;
        e["measures"]              = r.profile.measures;
        e["purities"]              = r.profile.purities;
        e["restarts_hitting_best"] = r.restarts_hitting_best;
        e["state"]                 = state_to_json(r.best_state);
        recs.push_back(std::move(e));
    }
    auto& trs = out["transitions"] = nlohmann::json::array();
    for (const auto& t : transitions) {
        nlohmann::json e;
        e["bracket_lo"]    = t.lo;
        e["bracket_hi"]    = t.hi;
        e["solved"]        = t.solved;
        if (t.solved) e["eta_star"] = t.eta_star;
        e["left_profile"]  = t.left_profile;
        e["right_profile"] = t.right_profile;
        trs.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// text parsing

namespace detail {

inline std::string strip_spaces(std::string_view s)
{
    std::string out;
    for (char c : s)
        if (!std::isspace((unsigned char)c)) out += c;
    return out;
}

inline double parse_plain_double(const std::string& s)
{
    if (s.empty()) throw std::invalid_argument("empty number");
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters in number '" + s + "'");
    return v;
}

} // namespace detail

/// Radians with optional pi literals: "0.5", "pi", "pi*0.75", "0.75*pi",
/// "pi/4", "2*pi/3", "-pi/2".
inline double parse_angle(std::string_view text)
{
    std::string s = detail::strip_spaces(text);
    const auto p  = s.find("pi");
    if (p == std::string::npos) return detail::parse_plain_double(s);

    double factor = 1.0;
    std::string left = s.substr(0, p), right = s.substr(p + 2);
    if (!left.empty()) {
        if (left == "-") factor = -1.0;
        else if (left == "+") factor = 1.0;
        else if (left.back() == '*') factor = detail::parse_plain_double(left.substr(0, left.size() - 1));
        else throw std::invalid_argument("parse_angle: cannot parse '" + std::string(text) + "'");
    }
    if (!right.empty()) {
        if (right.front() == '*') factor *= detail::parse_plain_double(right.substr(1));
        else if (right.front() == '/') factor /= detail::parse_plain_double(right.substr(1));
        else throw std::invalid_argument("parse_angle: cannot parse '" + std::string(text) + "'");
    }
    return factor * M_PI;
}

/// "start:stop:count" -> count evenly spaced points, endpoints included.
inline std::vector<double> parse_grid(std::string_view text)
{
    const std::string s = detail::strip_spaces(text);
    const auto c1 = s.find(':');
    const auto c2 = (c1 == std::string::npos) ? std::string::npos : s.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("parse_grid: expected start:stop:count");
    const double start = parse_angle(s.substr(0, c1));
    const double stop  = parse_angle(s.substr(c1 + 1, c2 - c1 - 1));
    const long count   = std::stol(s.substr(c2 + 1));
    if (count < 2) throw std::invalid_argument("parse_grid: count must be >= 2");
    std::vector<double> grid(count);
    for (long i = 0; i < count; ++i) grid[i] = start + (stop - start) * i / (count - 1);
    return grid;
}

/// One amplitude: "1", "-0.5", "0.5i", "1+2i", "1-0.5i", "i", "-i".
inline std::complex<double> parse_complex(std::string_view text)
{
    std::string s = detail::strip_spaces(text);
    if (s.empty()) throw std::invalid_argument("parse_complex: empty component");
    if (s.back() != 'i' && s.back() != 'I') return {detail::parse_plain_double(s), 0.0};

    s.pop_back(); // drop the i
    // split at the last top-level +/- (not part of an exponent, not leading)
    size_t split = std::string::npos;
    for (size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_value = [](std::string t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return detail::parse_plain_double(t);
    };
    if (split == std::string::npos) return {0.0, imag_value(s)};
    return {detail::parse_plain_double(s.substr(0, split)), imag_value(s.substr(split))};
}

/// Comma-separated amplitude list (descending m) -> normalized state.
inline SpinState parse_amplitudes(Spin j, std::string_view text)
{
    std::vector<std::complex<double>> vals;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            vals.push_back(parse_complex(cur));
            cur.clear();
        } else
            cur += c;
    }
    vals.push_back(parse_complex(cur));
    if ((int)vals.size() != j.dimension())
        throw std::invalid_argument("amplitude list must have 2j+1 entries for j = " + j.str());
    Eigen::VectorXcd a(j.dimension());
    for (int i = 0; i < j.dimension(); ++i) a(i) = vals[i];
    return SpinState(j, std::move(a));
}

/// State source: catalog id | "dicke:m" | inline amplitude list | JSON file
/// ("file.json" or "@path").
inline SpinState parse_state_spec(Spin j, std::string_view spec, double chi = 0.0)
{
    const std::string s(spec);
    if (s.find(',') != std::string::npos) return parse_amplitudes(j, s);
    if (s.rfind("dicke:", 0) == 0) {
        const Spin m_as_spin = Spin::from_string(s[6] == '-' ? s.substr(7) : s.substr(6));
        const int two_m      = (s[6] == '-' ? -1 : 1) * m_as_spin.two_j();
        return SpinState::dicke(j, two_m);
    }
    const bool is_file = s.rfind('@', 0) == 0 || (s.size() > 5 && s.substr(s.size() - 5) == ".json");
    if (is_file) {
        const std::string path = s.rfind('@', 0) == 0 ? s.substr(1) : s;
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open state file '" + path + "'");
        nlohmann::json doc;
        in >> doc;
        SpinState st = state_from_json(doc);
        if (st.spin() != j)
            throw std::invalid_argument("state file has two_j = " +
                                        std::to_string(st.spin().two_j()) + ", expected " +
                                        std::to_string(j.two_j()));
        return st;
    }
    return named_state(s, j, chi);
}

} // namespace rotosense
