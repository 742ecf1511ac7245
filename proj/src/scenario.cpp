#include "dwadmm/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace dwadmm {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
    throw std::invalid_argument("config: " + message);
}

void require_keys(const json& object, const std::set<std::string>& allowed,
                  const std::string& where) {
    if (!object.is_object()) config_error(where + " must be an object");
    for (const auto& [key, value] : object.items()) {
        (void)value;
        if (!allowed.count(key)) config_error(where + ": unknown field \"" + key + "\"");
    }
}

WeightedGraph parse_graph(const json& section) {
    if (section.contains("generator")) {
        require_keys(section, {"generator"}, "graph");
        const json& gen = section.at("generator");
        require_keys(gen, {"type", "nodes", "chords", "edge_prob", "weight_min", "weight_max",
                           "seed"},
                     "graph.generator");
        const std::string type = gen.at("type").get<std::string>();
        const int nodes = gen.at("nodes").get<int>();
        const double wmin = gen.value("weight_min", 1.0);
        const double wmax = gen.value("weight_max", 1.0);
        const std::uint64_t seed = gen.value("seed", 0ULL);
        if (type == "ring_with_chords") {
            return generate_ring_with_chords(nodes, gen.value("chords", 0), wmin, wmax, seed);
        }
        if (type == "erdos_renyi") {
            return generate_connected_non_bipartite(nodes, gen.value("edge_prob", 0.5), wmin,
                                                    wmax, seed);
        }
        config_error("graph.generator: unknown type \"" + type + "\"");
    }
    require_keys(section, {"nodes", "edges"}, "graph");
    if (!section.contains("nodes") || !section.contains("edges")) {
        config_error("graph needs \"nodes\" and \"edges\" (or a \"generator\")");
    }
    const int nodes = section.at("nodes").get<int>();
    std::vector<std::tuple<int, int, double>> triples;
    for (const json& entry : section.at("edges")) {
        if (!entry.is_array() || entry.size() != 3) {
            config_error("graph.edges entries must be [i, j, weight]");
        }
        triples.emplace_back(entry[0].get<int>(), entry[1].get<int>(), entry[2].get<double>());
    }
    try {
        return WeightedGraph::from_triples(nodes, triples);
    } catch (const std::exception& e) {
        config_error(std::string("graph: ") + e.what());
    }
}

Matrix parse_matrix(const json& rows, const std::string& where) {
    if (!rows.is_array() || rows.empty()) config_error(where + " must be a nonempty 2d array");
    const std::size_t cols = rows[0].size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_array() || rows[r].size() != cols) {
            config_error(where + " rows must all have the same length");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                rows[r][c].get<double>();
        }
    }
    return m;
}

Vector parse_vector(const json& values, const std::string& where) {
    if (!values.is_array()) config_error(where + " must be an array");
    Vector v(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) =
        values[i].get<double>();
    return v;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json values = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) values.push_back(v(i));
    return values;
}

// Normalized echo plus the objective set. Quadratics echo in the general
// q/linear/offset form regardless of how they were written.
std::pair<ObjectiveSet, json> parse_objectives(const json& section, int node_count) {
    if (!section.is_object() || !section.contains("family")) {
        config_error("objective needs a \"family\" tag");
    }
    const std::string family = section.at("family").get<std::string>();
    std::vector<LocalObjective> locals;
    json echo;
    echo["family"] = family;

    if (family == "quadratic") {
        require_keys(section, {"family", "centers", "q", "linear", "offset"}, "objective");
        if (section.contains("centers")) {
            const Vector centers = parse_vector(section.at("centers"), "objective.centers");
            if (centers.size() != node_count) {
                config_error("objective.centers needs one entry per node");
            }
            for (Eigen::Index i = 0; i < centers.size(); ++i) {
                locals.push_back(LocalObjective::scalar_quadratic(centers(i)));
            }
        } else {
            if (!section.contains("q") || !section.contains("linear")) {
                config_error("objective: quadratic needs \"centers\" or \"q\" + \"linear\"");
            }
            const json& q = section.at("q");
            const json& linear = section.at("linear");
            if (!q.is_array() || static_cast<int>(q.size()) != node_count ||
                !linear.is_array() || static_cast<int>(linear.size()) != node_count) {
                config_error("objective: \"q\" and \"linear\" need one entry per node");
            }
            for (int i = 0; i < node_count; ++i) {
                const double offset =
                    section.contains("offset") ? section.at("offset").at(i).get<double>() : 0.0;
                try {
                    locals.push_back(LocalObjective::quadratic(
                        parse_matrix(q[i], "objective.q"),
                        parse_vector(linear[i], "objective.linear"), offset));
                } catch (const std::exception& e) {
                    config_error(std::string("objective node ") + std::to_string(i) + ": " +
                                 e.what());
                }
            }
        }
        json qs = json::array(), linears = json::array(), offsets = json::array();
        for (const LocalObjective& obj : locals) {
            qs.push_back(matrix_to_json(obj.quad()));
            linears.push_back(vector_to_json(obj.linear()));
            offsets.push_back(obj.offset());
        }
        echo["q"] = qs;
        echo["linear"] = linears;
        echo["offset"] = offsets;
    } else if (family == "logistic") {
        require_keys(section, {"family", "features", "labels", "ridge"}, "objective");
        if (!section.contains("features") || !section.contains("labels")) {
            config_error("objective: logistic needs \"features\" and \"labels\" per node");
        }
        const json& features = section.at("features");
        const json& labels = section.at("labels");
        const double ridge = section.value("ridge", 1e-3);
        if (static_cast<int>(features.size()) != node_count ||
            static_cast<int>(labels.size()) != node_count) {
            config_error("objective: logistic needs one feature block and label list per node");
        }
        json features_echo = json::array(), labels_echo = json::array();
        for (int i = 0; i < node_count; ++i) {
            const Matrix f = parse_matrix(features[i], "objective.features");
            const Vector l = parse_vector(labels[i], "objective.labels");
            try {
                locals.push_back(LocalObjective::logistic(f, l, ridge));
            } catch (const std::exception& e) {
                config_error(std::string("objective node ") + std::to_string(i) + ": " + e.what());
            }
            features_echo.push_back(matrix_to_json(f));
            labels_echo.push_back(vector_to_json(l));
        }
        echo["features"] = features_echo;
        echo["labels"] = labels_echo;
        echo["ridge"] = ridge;
    } else {
        config_error("objective: unknown family \"" + family + "\"");
    }
    return {ObjectiveSet(std::move(locals)), echo};
}

std::pair<AttackSpec, json> parse_attack(const json& section, std::uint64_t default_seed) {
    AttackSpec spec;
    spec.seed = default_seed;
    json echo;
    if (section.is_null()) {
        echo["model"] = "none";
        echo["nodes"] = json::array();
        echo["start"] = spec.start_iteration;
        echo["seed"] = spec.seed;
        return {spec, echo};
    }
    require_keys(section, {"model", "nodes", "bias", "sigma", "target", "delay", "start", "seed"},
                 "attack");
    const std::string model = section.value("model", "none");
    if (model == "none") {
        spec.model = AttackModel::None;
    } else if (model == "constant_bias") {
        spec.model = AttackModel::ConstantBias;
    } else if (model == "gaussian_noise") {
        spec.model = AttackModel::GaussianNoise;
    } else if (model == "sign_flip") {
        spec.model = AttackModel::SignFlip;
    } else if (model == "collusion") {
        spec.model = AttackModel::Collusion;
    } else if (model == "replay") {
        spec.model = AttackModel::Replay;
    } else {
        config_error("attack: unknown model \"" + model + "\"");
    }
    if (section.contains("nodes")) {
        for (const json& node : section.at("nodes")) spec.byzantine.insert(node.get<int>());
    }
    spec.start_iteration = section.value("start", 0);
    spec.seed = section.value("seed", default_seed);

    echo["model"] = model;
    echo["nodes"] = json::array();
    for (int node : spec.byzantine) echo["nodes"].push_back(node);
    echo["start"] = spec.start_iteration;
    echo["seed"] = spec.seed;

    switch (spec.model) {
        case AttackModel::ConstantBias:
            if (!section.contains("bias")) config_error("attack: constant_bias needs \"bias\"");
            spec.bias = parse_vector(section.at("bias"), "attack.bias");
            echo["bias"] = vector_to_json(spec.bias);
            break;
        case AttackModel::GaussianNoise:
            spec.sigma = section.value("sigma", 1.0);
            if (!(spec.sigma > 0.0)) config_error("attack.sigma must be positive");
            echo["sigma"] = spec.sigma;
            break;
        case AttackModel::Collusion:
            if (!section.contains("target")) config_error("attack: collusion needs \"target\"");
            spec.target = parse_vector(section.at("target"), "attack.target");
            echo["target"] = vector_to_json(spec.target);
            break;
        case AttackModel::Replay:
            spec.delay = section.value("delay", 1);
            if (spec.delay < 1) config_error("attack.delay must be >= 1");
            echo["delay"] = spec.delay;
            break;
        default:
            break;
    }
    return {spec, echo};
}

std::tuple<WeightPolicy, TrustParams, json> parse_policy(const json& section) {
    WeightPolicy policy;
    TrustParams trust;
    json echo;
    if (!section.is_null()) {
        require_keys(section, {"mode", "schedule", "alpha", "trust"}, "policy");
        const std::string mode = section.value("mode", "static");
        if (mode == "static") {
            policy.mode = WeightMode::Static;
        } else if (mode == "uniform_scalar") {
            policy.mode = WeightMode::UniformScalar;
        } else if (mode == "trust_adaptive") {
            policy.mode = WeightMode::TrustAdaptive;
        } else {
            config_error("policy: unknown mode \"" + mode + "\"");
        }
        policy.alpha = section.value("alpha", 2.0);
        if (section.contains("schedule")) {
            for (const json& c : section.at("schedule")) policy.schedule.push_back(c.get<double>());
        }
        if (policy.mode == WeightMode::UniformScalar && policy.schedule.empty()) {
            config_error("policy: uniform_scalar needs a nonempty \"schedule\"");
        }
        for (double c : policy.schedule) {
            if (!(c > 0.0) || c > policy.alpha) {
                config_error("policy.schedule entries must lie in (0, alpha]");
            }
        }
        if (section.contains("trust")) {
            const json& t = section.at("trust");
            require_keys(t, {"initial", "decay", "deviation_tolerance", "threshold", "min_factor"},
                         "policy.trust");
            trust.initial = t.value("initial", trust.initial);
            trust.decay = t.value("decay", trust.decay);
            trust.deviation_tol = t.value("deviation_tolerance", trust.deviation_tol);
            trust.threshold = t.value("threshold", trust.threshold);
            trust.min_factor = t.value("min_factor", trust.min_factor);
        }
    }
    trust.alpha = policy.alpha;

    echo["mode"] = policy.mode == WeightMode::Static
                       ? "static"
                       : (policy.mode == WeightMode::UniformScalar ? "uniform_scalar"
                                                                   : "trust_adaptive");
    echo["alpha"] = policy.alpha;
    echo["schedule"] = policy.schedule;
    echo["trust"] = {{"initial", trust.initial},
                     {"decay", trust.decay},
                     {"deviation_tolerance", trust.deviation_tol},
                     {"threshold", trust.threshold},
                     {"min_factor", trust.min_factor}};
    return {policy, trust, echo};
}

}  // namespace

ParsedScenario parse_scenario_text(const std::string& text, const ScenarioOverrides& overrides) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        config_error(std::string("not valid JSON: ") + e.what());
    }
    require_keys(root, {"graph", "objective", "attack", "policy", "max_iter", "tol", "seed",
                        "algorithm"},
                 "scenario");
    if (!root.contains("graph") || !root.contains("objective")) {
        config_error("scenario needs at least \"graph\" and \"objective\"");
    }

    const std::uint64_t seed =
        overrides.seed.value_or(root.value("seed", static_cast<std::uint64_t>(0)));
    const int max_iterations = overrides.max_iterations.value_or(root.value("max_iter", 5000));

    Tolerances tolerances;
    if (overrides.tolerance) {
        tolerances.primal = tolerances.consensus = *overrides.tolerance;
    } else if (root.contains("tol")) {
        const json& tol = root.at("tol");
        if (tol.is_number()) {
            tolerances.primal = tolerances.consensus = tol.get<double>();
        } else {
            require_keys(tol, {"primal", "consensus"}, "tol");
            tolerances.primal = tol.value("primal", tolerances.primal);
            tolerances.consensus = tol.value("consensus", tolerances.consensus);
        }
    }
    if (!(tolerances.primal > 0.0) || !(tolerances.consensus > 0.0)) {
        config_error("tol values must be positive");
    }

    WeightedGraph graph = parse_graph(root.at("graph"));
    auto [objectives, objective_echo] = parse_objectives(root.at("objective"), graph.node_count());
    auto [attack, attack_echo] =
        parse_attack(root.contains("attack") ? root.at("attack") : json(), seed);
    auto [policy, trust, policy_echo] =
        parse_policy(root.contains("policy") ? root.at("policy") : json());

    for (int node : attack.byzantine) {
        if (node < 0 || node >= graph.node_count()) {
            config_error("attack.nodes: node " + std::to_string(node) + " out of range");
        }
    }
    if (!attack.byzantine.empty() &&
        static_cast<int>(attack.byzantine.size()) >= graph.node_count()) {
        config_error("attack.nodes: at least one honest node is required");
    }

    Algorithm algorithm = Algorithm::DwAdmm;
    bool algorithm_specified = false;
    if (root.contains("algorithm")) {
        algorithm_specified = true;
        const std::string name = root.at("algorithm").get<std::string>();
        if (name == "dw_admm") {
            algorithm = Algorithm::DwAdmm;
        } else if (name == "conventional_admm") {
            algorithm = Algorithm::ConventionalAdmm;
        } else {
            config_error("unknown algorithm \"" + name + "\"");
        }
    }

    ParsedScenario parsed{.scenario = Scenario{.graph = std::move(graph),
                                               .objectives = std::move(objectives),
                                               .attack = std::move(attack),
                                               .policy = std::move(policy),
                                               .trust = trust,
                                               .max_iterations = max_iterations,
                                               .tolerances = tolerances,
                                               .seed = seed,
                                               .algorithm = algorithm},
                          .assumptions = {},
                          .warnings = {},
                          .algorithm_specified = algorithm_specified,
                          .resolved = json()};

    parsed.assumptions =
        validate_assumptions(parsed.scenario.graph, parsed.scenario.attack.byzantine);
    const bool error_free = parsed.scenario.attack.model == AttackModel::None ||
                            parsed.scenario.attack.byzantine.empty();
    if (error_free) {
        if (!parsed.assumptions.non_bipartite || !parsed.assumptions.connected) {
            std::string message = "structural assumptions fail for an error-free run:";
            for (const std::string& failure : parsed.assumptions.failures) {
                message += " " + failure + ";";
            }
            config_error(message);
        }
    } else {
        for (const std::string& failure : parsed.assumptions.failures) {
            parsed.warnings.push_back("assumption: " + failure);
        }
    }

    json edges = json::array();
    for (const Edge& e : parsed.scenario.graph.edges()) {
        edges.push_back(json::array({e.i, e.j, e.base_weight}));
    }
    parsed.resolved["graph"] = {{"nodes", parsed.scenario.graph.node_count()}, {"edges", edges}};
    parsed.resolved["objective"] = objective_echo;
    parsed.resolved["attack"] = attack_echo;
    parsed.resolved["policy"] = policy_echo;
    parsed.resolved["max_iter"] = max_iterations;
    parsed.resolved["tol"] = {{"primal", tolerances.primal}, {"consensus", tolerances.consensus}};
    parsed.resolved["seed"] = seed;
    if (algorithm_specified) {
        parsed.resolved["algorithm"] =
            algorithm == Algorithm::DwAdmm ? "dw_admm" : "conventional_admm";
    }
    return parsed;
}

ParsedScenario parse_scenario_file(const std::string& path, const ScenarioOverrides& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open \"" + path + "\"");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str(), overrides);
}

}  // namespace dwadmm
