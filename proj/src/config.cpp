#include "slv/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace slv {

namespace {

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "' has a malformed number: " + value);
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "' has a malformed integer: " + value);
    return v;
}

PositivityPolicy parse_policy(const std::string& key, const std::string& value) {
    if (value == "absorb") return PositivityPolicy::Absorb;
    if (value == "clip") return PositivityPolicy::ClipToEpsilon;
    throw ConfigError("key '" + key + "' must be 'absorb' or 'clip'");
}

SectionMap parse_ini(const std::string& text) {
    SectionMap sections;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (sections.count(section))
                throw ConfigError("duplicate section [" + section + "]");
            sections[section]; // may legitimately be empty
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) +
                              ": key outside any section");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) +
                              ": empty key or value");
        if (!sections[section].emplace(key, value).second)
            throw ConfigError("duplicate key '" + key + "' in [" + section + "]");
    }
    return sections;
}

SectionMap parse_json_sections(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("JSON parse failure: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("top-level JSON must be an object");
    SectionMap sections;
    for (const auto& [section, body] : j.items()) {
        if (!body.is_object())
            throw ConfigError("section '" + section + "' must be an object");
        for (const auto& [key, value] : body.items()) {
            std::string str;
            if (value.is_string())
                str = value.get<std::string>();
            else if (value.is_number_integer())
                str = std::to_string(value.get<long long>());
            else if (value.is_number())
                str = nlohmann::json(value).dump();
            else
                throw ConfigError("key '" + key + "' must be scalar");
            sections[section][key] = str;
        }
    }
    return sections;
}

void load_model(const std::map<std::string, std::string>& kv, PowerModel& m) {
    const std::map<std::string, double*> fields = {
        {"a1", &m.a1},       {"a2", &m.a2},
        {"a3", &m.a3},       {"p1", &m.p1},
        {"p2", &m.p2},       {"p3", &m.p3},
        {"b1", &m.b1},       {"b2", &m.b2},
        {"b3", &m.b3},       {"q1", &m.q1},
        {"q2", &m.q2},       {"q3", &m.q3},
        {"eta", &m.eta},     {"theta", &m.theta_exp},
        {"kappa", &m.kappa_exp}, {"alpha1", &m.alpha1},
        {"alpha2", &m.alpha2}};
    for (const auto& [key, value] : kv) {
        auto it = fields.find(key);
        if (it == fields.end())
            throw ConfigError("unknown key '" + key + "' in [model]");
        *it->second = parse_double(key, value);
    }
    for (const auto& [key, ptr] : fields) {
        (void)ptr;
        if (!kv.count(key))
            throw ConfigError("missing key '" + key + "' in [model]");
    }
}

void load_sim(const std::map<std::string, std::string>& kv, SimConfig& sim) {
    for (const auto& [key, value] : kv) {
        if (key == "dt")
            sim.dt = parse_double(key, value);
        else if (key == "tmax")
            sim.t_max = parse_double(key, value);
        else if (key == "eps")
            sim.eps_abs = parse_double(key, value);
        else if (key == "xcap")
            sim.x_cap = parse_double(key, value);
        else if (key == "x0")
            sim.x0 = parse_double(key, value);
        else if (key == "y0")
            sim.y0 = parse_double(key, value);
        else if (key == "snapshot_stride")
            sim.snapshot_stride = parse_u64(key, value);
        else if (key == "policy_x")
            sim.policy_x = parse_policy(key, value);
        else if (key == "policy_y")
            sim.policy_y = parse_policy(key, value);
        else
            throw ConfigError("unknown key '" + key + "' in [sim]");
    }
}

void load_run(const std::map<std::string, std::string>& kv, RunConfig& run) {
    for (const auto& [key, value] : kv) {
        if (key == "n")
            run.n = parse_u64(key, value);
        else if (key == "seed")
            run.seed = parse_u64(key, value);
        else if (key == "threads")
            run.threads = int(parse_u64(key, value));
        else if (key == "out")
            run.out = value;
        else if (key == "format") {
            if (value != "csv" && value != "json")
                throw ConfigError("format must be 'csv' or 'json'");
            run.format = value;
        } else
            throw ConfigError("unknown key '" + key + "' in [run]");
    }
}

ExperimentConfig from_sections(const SectionMap& sections) {
    ExperimentConfig cfg;
    for (const auto& [name, kv] : sections) {
        if (name == "model") {
            load_model(kv, cfg.model);
            cfg.has_model = true;
        } else if (name == "sim") {
            load_sim(kv, cfg.sim);
        } else if (name == "run") {
            load_run(kv, cfg.run);
        } else {
            throw ConfigError("unknown section [" + name + "]");
        }
    }
    return cfg;
}

} // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& format) {
    if (format == "json") return from_sections(parse_json_sections(text));
    if (format == "ini") return from_sections(parse_ini(text));
    throw ConfigError("unknown config format: " + format);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const bool json = path.size() >= 5 && path.rfind(".json") == path.size() - 5;
    return parse_config(buf.str(), json ? "json" : "ini");
}

std::string model_section_ini(const PowerModel& m) {
    std::ostringstream out;
    auto num = [](double v) { return nlohmann::json(v).dump(); };
    out << "[model]\n";
    out << "a1 = " << num(m.a1) << "\na2 = " << num(m.a2) << "\na3 = "
        << num(m.a3) << "\n";
    out << "p1 = " << num(m.p1) << "\np2 = " << num(m.p2) << "\np3 = "
        << num(m.p3) << "\n";
    out << "b1 = " << num(m.b1) << "\nb2 = " << num(m.b2) << "\nb3 = "
        << num(m.b3) << "\n";
    out << "q1 = " << num(m.q1) << "\nq2 = " << num(m.q2) << "\nq3 = "
        << num(m.q3) << "\n";
    out << "eta = " << num(m.eta) << "\ntheta = " << num(m.theta_exp) << "\n";
    out << "kappa = " << num(m.kappa_exp) << "\n";
    out << "alpha1 = " << num(m.alpha1) << "\nalpha2 = " << num(m.alpha2)
        << "\n";
    return out.str();
}

void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
    PowerModel& m = cfg.model;
    const std::map<std::string, double*> fields = {
        {"a1", &m.a1},       {"a2", &m.a2},
        {"a3", &m.a3},       {"p1", &m.p1},
        {"p2", &m.p2},       {"p3", &m.p3},
        {"b1", &m.b1},       {"b2", &m.b2},
        {"b3", &m.b3},       {"q1", &m.q1},
        {"q2", &m.q2},       {"q3", &m.q3},
        {"eta", &m.eta},     {"theta", &m.theta_exp},
        {"kappa", &m.kappa_exp}, {"alpha1", &m.alpha1},
        {"alpha2", &m.alpha2},
        {"dt", &cfg.sim.dt}, {"tmax", &cfg.sim.t_max},
        {"eps", &cfg.sim.eps_abs}, {"xcap", &cfg.sim.x_cap},
        {"x0", &cfg.sim.x0}, {"y0", &cfg.sim.y0}};
    auto it = fields.find(key);
    if (it == fields.end())
        throw ConfigError("unknown sweep key '" + key + "'");
    *it->second = parse_double(key, value);
}

} // namespace slv
