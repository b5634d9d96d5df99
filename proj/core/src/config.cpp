#include "sumeval/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "sumeval/errors.hpp"

namespace sumeval {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "yes" || value == "1") return true;
    if (value == "false" || value == "no" || value == "0") return false;
    throw InvalidArg("config: bad boolean for " + key + ": " + value);
}

int parse_int(const std::string& value, const std::string& key) {
    try {
        return std::stoi(value);
    } catch (const std::exception&) {
        throw InvalidArg("config: bad integer for " + key + ": " + value);
    }
}

double parse_double(const std::string& value, const std::string& key) {
    try {
        return std::stod(value);
    } catch (const std::exception&) {
        throw InvalidArg("config: bad number for " + key + ": " + value);
    }
}

void require_keys(const std::string& section, const std::map<std::string, std::string>& kv,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : kv) {
        if (!allowed.count(key)) {
            throw InvalidArg("config: unknown key \"" + key + "\" in [" + section + "]");
        }
    }
}

}  // namespace

std::map<std::string, std::map<std::string, std::string>> parse_ini(const std::string& text) {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string current;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw InvalidArg("config line " + std::to_string(line_no) + ": bad section header");
            }
            current = trim(t.substr(1, t.size() - 2));
            sections[current];  // section may stay empty
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw InvalidArg("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw InvalidArg("config line " + std::to_string(line_no) + ": empty key");
        }
        sections[current][key] = value;
    }
    return sections;
}

const ProviderProfile* RunConfig::find_provider(const std::string& id) const {
    for (const auto& p : providers) {
        if (p.provider_id == id) return &p;
    }
    return nullptr;
}

std::filesystem::path RunConfig::resolve(const std::filesystem::path& p) const {
    return p.is_absolute() ? p : config_dir / p;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open config file: " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    RunConfig cfg;
    cfg.config_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    cfg.config_sha256 = sha256_hex(text);

    const auto sections = parse_ini(text);
    for (const auto& [name, kv] : sections) {
        if (name == "corpus") {
            require_keys(name, kv, {"path", "min_words", "max_words"});
            if (auto it = kv.find("path"); it != kv.end()) cfg.corpus_path = it->second;
            if (auto it = kv.find("min_words"); it != kv.end())
                cfg.filter.min_words = parse_int(it->second, "min_words");
            if (auto it = kv.find("max_words"); it != kv.end())
                cfg.filter.max_words = parse_int(it->second, "max_words");
        } else if (name == "run") {
            require_keys(name, kv,
                         {"out_dir", "cache_mode", "cache_path", "parallelism", "include_reference"});
            if (auto it = kv.find("out_dir"); it != kv.end()) cfg.out_dir = it->second;
            if (auto it = kv.find("cache_mode"); it != kv.end())
                cfg.cache_mode = cache_mode_from_string(it->second);
            if (auto it = kv.find("cache_path"); it != kv.end()) cfg.cache_path = it->second;
            if (auto it = kv.find("parallelism"); it != kv.end())
                cfg.parallelism = parse_int(it->second, "parallelism");
            if (auto it = kv.find("include_reference"); it != kv.end())
                cfg.include_reference = parse_bool(it->second, "include_reference");
        } else if (name == "embedding") {
            require_keys(name, kv, {"provider", "dimension", "endpoint", "model"});
            if (auto it = kv.find("provider"); it != kv.end()) cfg.embedding.provider = it->second;
            if (auto it = kv.find("dimension"); it != kv.end())
                cfg.embedding.dimension = static_cast<std::size_t>(parse_int(it->second, "dimension"));
            if (auto it = kv.find("endpoint"); it != kv.end()) cfg.embedding.endpoint = it->second;
            if (auto it = kv.find("model"); it != kv.end()) cfg.embedding.model = it->second;
        } else if (name == "textrank") {
            require_keys(name, kv, {"enabled", "top_k", "damping", "tolerance", "max_iterations"});
            if (auto it = kv.find("enabled"); it != kv.end())
                cfg.textrank_enabled = parse_bool(it->second, "enabled");
            if (auto it = kv.find("top_k"); it != kv.end())
                cfg.textrank_top_k = parse_int(it->second, "top_k");
            if (auto it = kv.find("damping"); it != kv.end())
                cfg.pagerank.damping = parse_double(it->second, "damping");
            if (auto it = kv.find("tolerance"); it != kv.end())
                cfg.pagerank.tolerance = parse_double(it->second, "tolerance");
            if (auto it = kv.find("max_iterations"); it != kv.end())
                cfg.pagerank.max_iterations = parse_int(it->second, "max_iterations");
        } else if (name == "summarize") {
            require_keys(name, kv, {"systems"});
            if (auto it = kv.find("systems"); it != kv.end()) cfg.summarize_with = split_csv(it->second);
        } else if (name == "evaluator") {
            require_keys(name, kv, {"provider"});
            if (auto it = kv.find("provider"); it != kv.end()) cfg.evaluator_provider = it->second;
        } else if (name == "import") {
            for (const auto& [system_id, file] : kv) cfg.imports[system_id] = file;
        } else if (name.rfind("provider:", 0) == 0) {
            require_keys(name, kv,
                         {"endpoint", "model", "api_key_env", "instruction_template", "max_in_flight"});
            ProviderProfile profile;
            profile.provider_id = name.substr(std::string("provider:").size());
            if (profile.provider_id.empty()) throw InvalidArg("config: provider section needs a name");
            if (auto it = kv.find("endpoint"); it != kv.end()) profile.endpoint = it->second;
            if (auto it = kv.find("model"); it != kv.end()) profile.model = it->second;
            if (auto it = kv.find("api_key_env"); it != kv.end()) profile.api_key_env = it->second;
            if (auto it = kv.find("instruction_template"); it != kv.end())
                profile.instruction_template = it->second;
            if (auto it = kv.find("max_in_flight"); it != kv.end())
                profile.max_in_flight = parse_int(it->second, "max_in_flight");
            cfg.providers.push_back(std::move(profile));
        } else if (name.empty()) {
            if (!kv.empty()) throw InvalidArg("config: keys before any [section]");
        } else {
            throw InvalidArg("config: unknown section [" + name + "]");
        }
    }

    for (const auto& id : cfg.summarize_with) {
        if (!cfg.find_provider(id)) {
            throw InvalidArg("config: [summarize] references unknown provider \"" + id + "\"");
        }
    }
    for (const auto& [id, path] : cfg.imports) {
        if (id == "textrank" || id == "reference") {
            throw InvalidArg("config: [import] system id \"" + id + "\" is reserved");
        }
        if (std::find(cfg.summarize_with.begin(), cfg.summarize_with.end(), id) !=
            cfg.summarize_with.end()) {
            throw InvalidArg("config: [import] system id \"" + id + "\" collides with [summarize]");
        }
    }
    if (!cfg.evaluator_provider.empty() && !cfg.find_provider(cfg.evaluator_provider)) {
        throw InvalidArg("config: [evaluator] references unknown provider \"" +
                         cfg.evaluator_provider + "\"");
    }
    if (cfg.parallelism < 1) throw InvalidArg("config: parallelism must be >= 1");
    return cfg;
}

}  // namespace sumeval
