#include "topictax/config.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace topictax {

namespace {

using nlohmann::ordered_json;

template <typename T>
void read_key(const ordered_json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj[key].get<T>();
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in.is_open()) {
        throw std::runtime_error("cannot open config file: " + path.string());
    }
    ordered_json obj = ordered_json::parse(in, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw std::runtime_error("config file is not a JSON object: " +
                                 path.string());
    }
    static const std::unordered_set<std::string> kKnown = {
        "min_count",      "stopwords",          "prepositions",
        "lambda1",        "lambda2",            "r_max",
        "k_min",          "s_min",              "expansion_k",
        "max_vertices",   "alpha",              "beta",
        "min_partition_size", "balance_epsilon", "coarsen_stop",
        "seed",
    };
    for (const auto& [key, _] : obj.items()) {
        if (kKnown.count(key) == 0) {
            throw std::runtime_error("unknown config key '" + key + "' in " +
                                     path.string());
        }
    }
    PipelineConfig cfg;
    read_key(obj, "min_count", cfg.min_count);
    read_key(obj, "stopwords", cfg.stopwords_path);
    read_key(obj, "prepositions", cfg.prepositions_path);
    read_key(obj, "lambda1", cfg.lambda1);
    read_key(obj, "lambda2", cfg.lambda2);
    read_key(obj, "r_max", cfg.r_max);
    read_key(obj, "k_min", cfg.k_min);
    read_key(obj, "s_min", cfg.s_min);
    read_key(obj, "expansion_k", cfg.expansion_k);
    read_key(obj, "max_vertices", cfg.max_vertices);
    read_key(obj, "alpha", cfg.alpha);
    read_key(obj, "beta", cfg.beta);
    read_key(obj, "min_partition_size", cfg.min_partition_size);
    read_key(obj, "balance_epsilon", cfg.balance_epsilon);
    read_key(obj, "coarsen_stop", cfg.coarsen_stop);
    read_key(obj, "seed", cfg.seed);
    return cfg;
}

std::string PipelineConfig::dump() const {
    ordered_json obj;
    obj["min_count"] = min_count;
    obj["stopwords"] = stopwords_path;
    obj["prepositions"] = prepositions_path;
    obj["lambda1"] = lambda1;
    obj["lambda2"] = lambda2;
    obj["r_max"] = r_max;
    obj["k_min"] = k_min;
    obj["s_min"] = s_min;
    obj["expansion_k"] = expansion_k;
    obj["max_vertices"] = max_vertices;
    obj["alpha"] = alpha;
    obj["beta"] = beta;
    obj["min_partition_size"] = min_partition_size;
    obj["balance_epsilon"] = balance_epsilon;
    obj["coarsen_stop"] = coarsen_stop;
    obj["seed"] = seed;
    return obj.dump(2) + "\n";
}

}  // namespace topictax
