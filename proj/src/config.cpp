#include "lrlstm/config.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace lrlstm {

TrainConfig RunConfig::to_train_config() const {
    TrainConfig t;
    t.adagrad_lr = adagrad_lr;
    t.embed_lr = embed_lr;
    t.dropout_p = dropout;
    t.batch_size = batch_size;
    t.max_batches = max_batches;
    t.eval_every = eval_every;
    t.threads = threads;
    t.seed = seed;
    t.clip = clip;
    t.clip_norm = clip_norm;
    t.reg = to_reg_config();
    return t;
}

RegularizerConfig RunConfig::to_reg_config() const {
    RegularizerConfig r;
    r.alpha = alpha;
    r.beta = beta;
    r.margin = margin;
    r.nsr = !disabled.count("nsr");
    r.sr = !disabled.count("sr");
    r.nr = !disabled.count("nr");
    r.ir = !disabled.count("ir");
    return r;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad real value for " + key + ": '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + key + ": '" + v + "'");
    }
}

uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        unsigned long long x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad seed value for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("bad boolean value for " + key + ": '" + v + "' (use on/off)");
}

std::set<std::string> parse_disable(const std::string& key, const std::string& v) {
    std::set<std::string> out;
    std::string item;
    std::istringstream ss(v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        if (item != "nsr" && item != "sr" && item != "nr" && item != "ir") {
            throw ConfigError("bad regularizer name for " + key + ": '" + item + "'");
        }
        out.insert(item);
    }
    return out;
}

std::array<double, 3> parse_split(const std::string& key, const std::string& v) {
    std::array<double, 3> out{};
    std::istringstream ss(v);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (i >= 3) throw ConfigError(key + ": expected exactly three ratios");
        out[static_cast<size_t>(i++)] = parse_real(key, item);
    }
    if (i != 3) throw ConfigError(key + ": expected exactly three ratios");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& key_table() {
    static const std::map<std::string, Setter> table = {
        {"data.format", [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v != "mr" && v != "sst" && v != "tsv") {
                 throw ConfigError("bad value for " + k + ": '" + v + "'");
             }
             c.data_format = v;
         }},
        {"data.mr_pos", [](RunConfig& c, const std::string&, const std::string& v) { c.mr_pos = v; }},
        {"data.mr_neg", [](RunConfig& c, const std::string&, const std::string& v) { c.mr_neg = v; }},
        {"data.train", [](RunConfig& c, const std::string&, const std::string& v) { c.train_path = v; }},
        {"data.valid", [](RunConfig& c, const std::string&, const std::string& v) { c.valid_path = v; }},
        {"data.test", [](RunConfig& c, const std::string&, const std::string& v) { c.test_path = v; }},
        {"data.classes", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.classes = static_cast<int>(parse_int(k, v));
         }},
        {"data.split", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.split = parse_split(k, v);
         }},
        {"resources.lexicon", [](RunConfig& c, const std::string&, const std::string& v) { c.lexicon_path = v; }},
        {"resources.negators", [](RunConfig& c, const std::string&, const std::string& v) { c.negators_path = v; }},
        {"resources.intensifiers", [](RunConfig& c, const std::string&, const std::string& v) { c.intensifiers_path = v; }},
        {"resources.embeddings", [](RunConfig& c, const std::string&, const std::string& v) { c.embeddings_path = v; }},
        {"model.variant", [](RunConfig& c, const std::string&, const std::string& v) {
             variant_from_string(v);  // validates
             c.variant = v;
         }},
        {"model.dim", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.dim = static_cast<int>(parse_int(k, v));
         }},
        {"model.embed_dim", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.embed_dim = static_cast<int>(parse_int(k, v));
         }},
        {"regularizers.alpha", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.alpha = parse_real(k, v);
         }},
        {"regularizers.beta", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.beta = parse_real(k, v);
         }},
        {"regularizers.margin", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.margin = parse_real(k, v);
         }},
        {"regularizers.disable", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.disabled = parse_disable(k, v);
         }},
        {"train.seed", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.seed = parse_u64(k, v);
         }},
        {"train.batch_size", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.batch_size = static_cast<int>(parse_int(k, v));
         }},
        {"train.max_batches", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.max_batches = static_cast<int>(parse_int(k, v));
         }},
        {"train.eval_every", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.eval_every = static_cast<int>(parse_int(k, v));
         }},
        {"train.threads", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.threads = static_cast<int>(parse_int(k, v));
         }},
        {"train.adagrad_lr", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.adagrad_lr = parse_real(k, v);
         }},
        {"train.embed_lr", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.embed_lr = parse_real(k, v);
         }},
        {"train.dropout", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.dropout = parse_real(k, v);
         }},
        {"train.clip", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.clip = parse_bool(k, v);
         }},
        {"train.clip_norm", [](RunConfig& c, const std::string& k, const std::string& v) {
             c.clip_norm = parse_real(k, v);
         }},
        {"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
    };
    return table;
}

}  // namespace

void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto& table = key_table();
    auto it = table.find(key);
    if (it == table.end()) {
        throw ConfigError("unknown configuration key '" + key + "'");
    }
    it->second(cfg, key, value);
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    std::string section;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(path + ":" + std::to_string(lineno) + ": unterminated section");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": empty key");
        }
        std::string full = section.empty() ? key : section + "." + key;
        try {
            apply_config_key(cfg, full, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

namespace {

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string render_run_config(const RunConfig& c) {
    std::ostringstream out;
    out << "[data]\n";
    out << "format = " << c.data_format << "\n";
    out << "mr_pos = " << c.mr_pos << "\n";
    out << "mr_neg = " << c.mr_neg << "\n";
    out << "train = " << c.train_path << "\n";
    out << "valid = " << c.valid_path << "\n";
    out << "test = " << c.test_path << "\n";
    out << "classes = " << c.classes << "\n";
    out << "split = " << fmt_real(c.split[0]) << "," << fmt_real(c.split[1]) << ","
        << fmt_real(c.split[2]) << "\n";
    out << "\n[resources]\n";
    out << "lexicon = " << c.lexicon_path << "\n";
    out << "negators = " << c.negators_path << "\n";
    out << "intensifiers = " << c.intensifiers_path << "\n";
    out << "embeddings = " << c.embeddings_path << "\n";
    out << "\n[model]\n";
    out << "variant = " << c.variant << "\n";
    out << "dim = " << c.dim << "\n";
    out << "embed_dim = " << c.embed_dim << "\n";
    out << "\n[regularizers]\n";
    out << "alpha = " << fmt_real(c.alpha) << "\n";
    out << "beta = " << fmt_real(c.beta) << "\n";
    out << "margin = " << fmt_real(c.margin) << "\n";
    out << "disable = ";
    bool first = true;
    for (const auto& d : c.disabled) {
        if (!first) out << ",";
        out << d;
        first = false;
    }
    out << "\n";
    out << "\n[train]\n";
    out << "seed = " << c.seed << "\n";
    out << "batch_size = " << c.batch_size << "\n";
    out << "max_batches = " << c.max_batches << "\n";
    out << "eval_every = " << c.eval_every << "\n";
    out << "threads = " << c.threads << "\n";
    out << "adagrad_lr = " << fmt_real(c.adagrad_lr) << "\n";
    out << "embed_lr = " << fmt_real(c.embed_lr) << "\n";
    out << "dropout = " << fmt_real(c.dropout) << "\n";
    out << "clip = " << (c.clip ? "on" : "off") << "\n";
    out << "clip_norm = " << fmt_real(c.clip_norm) << "\n";
    out << "\n[output]\n";
    out << "dir = " << c.out_dir << "\n";
    return out.str();
}

void write_config_snapshot(const RunConfig& cfg, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::string path = dir + "/config.resolved";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write config snapshot: " + path);
    out << render_run_config(cfg);
}

}  // namespace lrlstm
