#include "smale/config.hpp"

#include <fstream>
#include <stdexcept>

namespace smale {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument("config: " + msg);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
    ExperimentConfig c;
    require(j.is_object(), "top level must be an object");
    c.schema_version = j.value("schema_version", 1);
    require(c.schema_version == 1, "unsupported schema_version");
    require(j.contains("seed"), "seed is mandatory for any sampled check");
    c.seed = j.at("seed").get<std::uint64_t>();

    require(j.contains("model") && j.at("model").is_object(), "model object required");
    const Json& m = j.at("model");
    c.model_type = m.value("type", "");
    require(c.model_type == "sft" || c.model_type == "torus",
            "model.type must be 'sft' or 'torus'");
    require(m.contains("matrix"), "model.matrix required");
    for (const auto& row : m.at("matrix")) {
        std::vector<long> r;
        for (const auto& v : row) r.push_back(v.get<long>());
        c.model_matrix.push_back(std::move(r));
    }
    require(!c.model_matrix.empty(), "model.matrix must be nonempty");
    if (c.model_type == "torus")
        require(c.model_matrix.size() == 2 && c.model_matrix[0].size() == 2,
                "torus matrix must be 2x2");

    auto pick = [&](const char* key, OrbitPick& o) {
        if (!j.contains(key)) return;
        const Json& p = j.at(key);
        o.period = p.value("period", o.period);
        o.count = p.value("count", o.count);
        o.offset = p.value("offset", o.offset);
        require(o.period >= 1 && o.count >= 1 && o.offset >= 0, std::string(key) + " invalid");
    };
    pick("p_orbits", c.p_pick);
    pick("q_orbits", c.q_pick);

    if (j.contains("basis")) c.basis_bound = j.at("basis").value("bound", c.basis_bound);
    require(c.basis_bound >= 1, "basis.bound must be positive");

    if (j.contains("partition")) {
        const Json& p = j.at("partition");
        c.partition.win_radius = p.value("win_radius", c.partition.win_radius);
        c.partition.multiplicity = p.value("multiplicity", c.partition.multiplicity);
        c.partition.grid_factor = p.value("grid_factor", c.partition.grid_factor);
        c.partition.support_halvings = p.value("support_halvings", c.partition.support_halvings);
        c.partition.phi_disjoint = p.value("phi_disjoint", c.partition.phi_disjoint);
        c.partition.seed_pairs = p.value("seed_pairs", c.partition.seed_pairs);
        c.partition.cover_v_bound = p.value("cover_v_bound", c.partition.cover_v_bound);
    }
    if (j.contains("horizons")) {
        const Json& h = j.at("horizons");
        c.horizons.n_max = h.value("n_max", c.horizons.n_max);
        c.horizons.window = h.value("window", c.horizons.window);
        c.horizons.steps = h.value("steps", c.horizons.steps);
    }
    if (j.contains("tolerances")) {
        const Json& t = j.at("tolerances");
        c.tolerances.idem = t.value("idem", c.tolerances.idem);
        c.tolerances.entrywise = t.value("entrywise", c.tolerances.entrywise);
        c.tolerances.residue = t.value("residue", c.tolerances.residue);
        c.tolerances.decay = t.value("decay", c.tolerances.decay);
        c.tolerances.dual_norm = t.value("dual_norm", c.tolerances.dual_norm);
        c.tolerances.continuity = t.value("continuity", c.tolerances.continuity);
    }
    if (j.contains("samples")) {
        const Json& s = j.at("samples");
        c.samples.axioms = s.value("axioms", c.samples.axioms);
        c.samples.partition = s.value("partition", c.samples.partition);
        c.samples.lemma21 = s.value("lemma21", c.samples.lemma21);
        c.samples.element_pairs = s.value("element_pairs", c.samples.element_pairs);
    }
    if (j.contains("ktheory")) {
        const Json& k = j.at("ktheory");
        c.corpus_count = k.value("corpus_count", c.corpus_count);
        c.corpus_max_size = k.value("corpus_max_size", c.corpus_max_size);
        c.snf_random_count = k.value("snf_random_count", c.snf_random_count);
    }
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("config: parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

Json ExperimentConfig::to_json() const {
    Json j;
    j["schema_version"] = schema_version;
    j["seed"] = seed;
    j["model"] = {{"type", model_type}, {"matrix", model_matrix}};
    j["p_orbits"] = {{"period", p_pick.period}, {"count", p_pick.count}, {"offset", p_pick.offset}};
    j["q_orbits"] = {{"period", q_pick.period}, {"count", q_pick.count}, {"offset", q_pick.offset}};
    j["basis"] = {{"bound", basis_bound}};
    j["partition"] = {{"win_radius", partition.win_radius},
                      {"multiplicity", partition.multiplicity},
                      {"grid_factor", partition.grid_factor},
                      {"support_halvings", partition.support_halvings},
                      {"phi_disjoint", partition.phi_disjoint},
                      {"seed_pairs", partition.seed_pairs},
                      {"cover_v_bound", partition.cover_v_bound}};
    j["horizons"] = {{"n_max", horizons.n_max},
                     {"window", horizons.window},
                     {"steps", horizons.steps}};
    j["tolerances"] = {{"idem", tolerances.idem},
                       {"entrywise", tolerances.entrywise},
                       {"residue", tolerances.residue},
                       {"decay", tolerances.decay},
                       {"dual_norm", tolerances.dual_norm},
                       {"continuity", tolerances.continuity}};
    j["samples"] = {{"axioms", samples.axioms},
                    {"partition", samples.partition},
                    {"lemma21", samples.lemma21},
                    {"element_pairs", samples.element_pairs}};
    j["ktheory"] = {{"corpus_count", corpus_count},
                    {"corpus_max_size", corpus_max_size},
                    {"snf_random_count", snf_random_count}};
    return j;
}

}  // namespace smale
