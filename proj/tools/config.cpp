#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace cli {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, int line) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    double v = 0.0;
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end)
        throw ConfigError("expected a number, got '" + s + "'", line);
    return v;
}

int parse_int(const std::string& s, int line) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    int v = 0;
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end)
        throw ConfigError("expected an integer, got '" + s + "'", line);
    return v;
}

bool parse_bool(const std::string& s, int line) {
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ConfigError("expected a boolean, got '" + s + "'", line);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

std::vector<double> parse_list(const std::string& s, int line) {
    std::vector<double> out;
    for (const std::string& item : split(s, ',')) {
        if (item.empty()) throw ConfigError("empty entry in number list", line);
        out.push_back(parse_double(item, line));
    }
    if (out.empty()) throw ConfigError("empty number list", line);
    return out;
}

struct VectorSectionState {
    int sources = 0;
};

void set_vector_key(VectorSpec& v, VectorSectionState& st, const std::string& key,
                    const std::string& value, int line) {
    if (key == "coeffs") {
        v.coeffs = parse_list(value, line);
        ++st.sources;
    } else if (key == "file") {
        if (value.empty()) throw ConfigError("empty file path", line);
        v.file = value;
        ++st.sources;
    } else if (key == "analytic") {
        if (value.empty()) throw ConfigError("empty analytic name", line);
        v.analytic = value;
        ++st.sources;
    } else if (key == "zero") {
        v.zero = parse_bool(value, line);
        if (v.zero) ++st.sources;
    } else {
        throw ConfigError("unknown key '" + key + "'", line);
    }
    v.present = true;
    if (st.sources > 1)
        throw ConfigError("more than one of coeffs/file/analytic/zero given", line);
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen_keys;
    VectorSectionState phi_state, psi_state, f_state;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        size_t hash = s.find_first_of("#;");
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("unterminated section header", line);
            section = trim(s.substr(1, s.size() - 2));
            static const std::set<std::string> known = {
                "problem", "operator", "g", "phi", "psi", "f",
                "quadrature", "inverse", "output"};
            if (!known.count(section))
                throw ConfigError("unknown section [" + section + "]", line);
            continue;
        }

        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + s + "'", line);
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line);
        if (section.empty())
            throw ConfigError("key '" + key + "' outside any section", line);
        std::string qual = section + "." + key;
        if (!seen_keys.insert(qual).second)
            throw ConfigError("duplicate key '" + qual + "'", line);

        if (section == "problem") {
            if (key == "rho") cfg.rho = parse_double(value, line);
            else if (key == "T") cfg.T = parse_double(value, line);
            else if (key == "K") cfg.K = parse_int(value, line);
            else throw ConfigError("unknown key '" + key + "' in [problem]", line);
        } else if (section == "operator") {
            if (key == "kind") cfg.op.kind = value;
            else if (key == "length") cfg.op.length = parse_double(value, line);
            else if (key == "eigenvalues") cfg.op.eigenvalues = parse_list(value, line);
            else throw ConfigError("unknown key '" + key + "' in [operator]", line);
        } else if (section == "g") {
            if (key == "kind") cfg.g.kind = value;
            else if (key == "value") cfg.g.value = parse_double(value, line);
            else if (key == "a") cfg.g.a = parse_double(value, line);
            else if (key == "b") cfg.g.b = parse_double(value, line);
            else if (key == "rate") cfg.g.rate = parse_double(value, line);
            else if (key == "omega") cfg.g.omega = parse_double(value, line);
            else if (key == "beta") cfg.g.beta = parse_double(value, line);
            else if (key == "file") cfg.g.file = value;
            else throw ConfigError("unknown key '" + key + "' in [g]", line);
        } else if (section == "phi") {
            set_vector_key(cfg.phi, phi_state, key, value, line);
        } else if (section == "psi") {
            set_vector_key(cfg.psi, psi_state, key, value, line);
        } else if (section == "f") {
            set_vector_key(cfg.f, f_state, key, value, line);
        } else if (section == "quadrature") {
            if (key == "panels") cfg.quad.panels = parse_int(value, line);
            else if (key == "nodes_per_panel")
                cfg.quad.nodes_per_panel = parse_int(value, line);
            else if (key == "grading_exponent")
                cfg.quad.grading_exponent = parse_double(value, line);
            else throw ConfigError("unknown key '" + key + "' in [quadrature]", line);
        } else if (section == "inverse") {
            if (key == "eps_b") cfg.inverse.eps_b = parse_double(value, line);
            else if (key == "tol_solv") cfg.inverse.tol_solv = parse_double(value, line);
            else if (key == "psi_path") cfg.inverse.psi_path = value;
            else if (key == "free_values") {
                for (const std::string& item : split(value, ',')) {
                    size_t colon = item.find(':');
                    if (colon == std::string::npos)
                        throw ConfigError("free_values entries must be k:value", line);
                    int k = parse_int(trim(item.substr(0, colon)), line);
                    double fv = parse_double(trim(item.substr(colon + 1)), line);
                    if (!cfg.inverse.free_values.emplace(k, fv).second)
                        throw ConfigError("duplicate free value for mode " +
                                              std::to_string(k),
                                          line);
                }
            } else throw ConfigError("unknown key '" + key + "' in [inverse]", line);
        } else if (section == "output") {
            if (key == "dir") cfg.output.dir = value;
            else if (key == "n_times") cfg.output.n_times = parse_int(value, line);
            else if (key == "field_points")
                cfg.output.field_points = parse_int(value, line);
            else throw ConfigError("unknown key '" + key + "' in [output]", line);
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

const char* mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::forward: return "forward";
        case RunMode::inverse: return "inverse";
        case RunMode::roundtrip: return "roundtrip";
    }
    return "?";
}

namespace {

void require_cfg(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

void check_vector(const VectorSpec& v, const char* name, int K, bool required) {
    if (!v.present) {
        require_cfg(!required, std::string("[") + name + "] section is required");
        return;
    }
    int sources = int(!v.coeffs.empty()) + int(!v.file.empty()) +
                  int(!v.analytic.empty()) + int(v.zero);
    require_cfg(sources == 1, std::string("[") + name +
                                  "] needs exactly one of coeffs/file/analytic/zero");
    if (!v.coeffs.empty())
        require_cfg(int(v.coeffs.size()) == K,
                    std::string("[") + name + "] coeffs length must equal K");
    if (!v.analytic.empty()) {
        static const std::set<std::string> names = {"one", "hat", "bump"};
        require_cfg(names.count(v.analytic) != 0,
                    std::string("[") + name + "] unknown analytic function '" +
                        v.analytic + "' (available: one, hat, bump)");
    }
}

} // namespace

void RunConfig::validate_for(RunMode mode) const {
    require_cfg(rho > 0.0 && rho <= 1.0, "[problem] rho must be in (0, 1]");
    require_cfg(T > 0.0, "[problem] T must be positive");
    require_cfg(K >= 1, "[problem] K must be >= 1");

    if (op.kind == "dirichlet_1d") {
        require_cfg(op.length > 0.0, "[operator] length must be positive");
        require_cfg(op.eigenvalues.empty(),
                    "[operator] eigenvalues only apply to kind = explicit");
    } else if (op.kind == "explicit") {
        require_cfg(int(op.eigenvalues.size()) == K,
                    "[operator] eigenvalues length must equal K");
        require_cfg(op.length == 0.0,
                    "[operator] length only applies to kind = dirichlet_1d");
    } else if (op.kind.empty()) {
        throw ConfigError("[operator] kind is required");
    } else {
        throw ConfigError("[operator] unknown kind '" + op.kind +
                          "' (dirichlet_1d or explicit)");
    }

    static const std::set<std::string> g_kinds = {"const",  "linear",     "exp_decay",
                                                  "cosine", "affine_exp", "sampled"};
    require_cfg(!g.kind.empty(), "[g] kind is required");
    require_cfg(g_kinds.count(g.kind) != 0, "[g] unknown kind '" + g.kind + "'");
    if (g.kind == "sampled")
        require_cfg(!g.file.empty(), "[g] kind = sampled needs file = <path>");
    else
        require_cfg(g.file.empty(), "[g] file only applies to kind = sampled");

    bool needs_field = output.field_points > 0;
    bool physical_input = !phi.analytic.empty() || !psi.analytic.empty() ||
                          !f.analytic.empty();
    if (needs_field || physical_input)
        require_cfg(op.kind == "dirichlet_1d",
                    "analytic vectors and field output need an operator with "
                    "eigenfunctions (kind = dirichlet_1d)");

    check_vector(phi, "phi", K, true);
    switch (mode) {
        case RunMode::forward:
            check_vector(f, "f", K, true);
            require_cfg(!psi.present, "[psi] does not apply to forward mode");
            break;
        case RunMode::inverse:
            check_vector(psi, "psi", K, true);
            require_cfg(!f.present, "[f] does not apply to inverse mode");
            break;
        case RunMode::roundtrip:
            check_vector(f, "f", K, true);
            require_cfg(!psi.present,
                        "[psi] is computed internally in roundtrip mode");
            break;
    }

    require_cfg(quad.panels >= 1, "[quadrature] panels must be >= 1");
    require_cfg(quad.nodes_per_panel >= 2 && quad.nodes_per_panel <= 64,
                "[quadrature] nodes_per_panel must be in [2, 64]");
    require_cfg(quad.grading_exponent == 0.0 || quad.grading_exponent >= 1.0,
                "[quadrature] grading_exponent must be 0 (auto) or >= 1");

    require_cfg(inverse.psi_path == "spectral" || inverse.psi_path == "quadrature",
                "[inverse] psi_path must be spectral or quadrature");
    for (const auto& kv : inverse.free_values)
        require_cfg(kv.first >= 1 && kv.first <= K,
                    "[inverse] free value index out of range");

    require_cfg(output.n_times >= 2, "[output] n_times must be >= 2");
    require_cfg(output.field_points >= 0, "[output] field_points must be >= 0");
}

} // namespace cli
