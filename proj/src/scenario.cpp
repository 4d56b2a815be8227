#include "ddsync/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ddsync/scenario_io.hpp"

namespace ddsync {

void validate_scenario(const Scenario& scenario) {
    validate_leader(scenario.leader);
    validate_graph(scenario.graph);
    if (scenario.followers.size() != scenario.graph.n())
        throw std::invalid_argument(
            "scenario: follower count does not match the graph size");
    const std::size_t p = scenario.leader.output_dim();
    for (std::size_t i = 0; i < scenario.followers.size(); ++i) {
        const FollowerSetup& f = scenario.followers[i];
        const std::string where = "scenario: follower " + std::to_string(i + 1);
        validate_data(f.data);
        if (f.c.rows() != p)
            throw std::invalid_argument(where + ": C row count must match dim(y_r)");
        if (f.c.cols() != f.data.state_dim())
            throw std::invalid_argument(where + ": C column count must match the state dimension");
        if (f.d.rows() != p || f.d.cols() != f.data.input_dim())
            throw std::invalid_argument(where + ": D shape mismatch");
        if (f.true_model) {
            validate_system(*f.true_model);
            if (f.true_model->a.rows() != f.data.state_dim() ||
                f.true_model->b.cols() != f.data.input_dim() ||
                f.true_model->e.cols() != f.data.disturbance_dim())
                throw std::invalid_argument(where + ": true model shape mismatch");
        }
    }
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

Matrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CSV file: " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ParseError(path.string() + ": line " + std::to_string(lineno) +
                                 ": not a number: '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(path.string() + ": line " + std::to_string(lineno) +
                             ": ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path.string() + ": empty matrix");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    if (!m.all_finite()) throw ParseError(path.string() + ": non-finite entry");
    return m;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

}  // namespace

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path.string());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& what) {
    throw ParseError(context + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& context) {
    if (!obj.is_object()) fail(context, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(context, std::string("missing field '") + key + "'");
    return *it;
}

Matrix parse_matrix(const json& value, const std::string& context,
                    const std::filesystem::path& base_dir) {
    if (value.is_object()) {
        const json& ref = field(value, "csv", context);
        if (!ref.is_string()) fail(context, "'csv' must be a path string");
        return read_matrix_csv(base_dir / ref.get<std::string>());
    }
    if (!value.is_array()) fail(context, "expected a matrix (nested array or csv ref)");
    // vectors may be written flat; treat as a single column
    if (!value.empty() && value.front().is_number()) {
        Matrix m(value.size(), 1);
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (!value[i].is_number()) fail(context, "mixed vector entries");
            m(i, 0) = value[i].get<double>();
        }
        return m;
    }
    const std::size_t rows = value.size();
    std::size_t cols = 0;
    if (rows > 0) {
        if (!value.front().is_array()) fail(context, "expected nested array rows");
        cols = value.front().size();
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = value[i];
        if (!row.is_array() || row.size() != cols)
            fail(context, "ragged row " + std::to_string(i));
        for (std::size_t j = 0; j < cols; ++j) {
            if (!row[j].is_number())
                fail(context, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is not a number");
            m(i, j) = row[j].get<double>();
        }
    }
    if (!m.all_finite()) fail(context, "non-finite entry");
    return m;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << doc.dump(2) << '\n';
}

LeaderSpec parse_leader(const json& obj, const std::string& context,
                        const std::filesystem::path& base_dir) {
    LeaderSpec leader;
    leader.s = parse_matrix(field(obj, "s", context), context + ".s", base_dir);
    leader.r_out = parse_matrix(field(obj, "r", context), context + ".r", base_dir);
    leader.x0 = parse_matrix(field(obj, "x0", context), context + ".x0", base_dir);
    return leader;
}

CommGraph parse_graph(const json& obj, const std::string& context,
                      const std::filesystem::path& base_dir) {
    CommGraph graph;
    graph.weights =
        parse_matrix(field(obj, "weights", context), context + ".weights", base_dir);
    const json& gains = field(obj, "leader_gains", context);
    if (!gains.is_array()) fail(context + ".leader_gains", "expected an array");
    for (const json& g : gains) {
        if (!g.is_number()) fail(context + ".leader_gains", "entry is not a number");
        graph.leader_gains.push_back(g.get<double>());
    }
    return graph;
}

json leader_to_json(const LeaderSpec& leader) {
    return json{{"s", matrix_to_json(leader.s)},
                {"r", matrix_to_json(leader.r_out)},
                {"x0", matrix_to_json(leader.x0)}};
}

json graph_to_json(const CommGraph& graph) {
    return json{{"weights", matrix_to_json(graph.weights)},
                {"leader_gains", graph.leader_gains}};
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
    const json doc = load_json_file(path);
    const std::filesystem::path base_dir = path.parent_path();
    Scenario scenario;
    scenario.leader = parse_leader(field(doc, "leader", "leader"), "leader", base_dir);
    scenario.graph = parse_graph(field(doc, "graph", "graph"), "graph", base_dir);

    const json& followers = field(doc, "followers", "followers");
    if (!followers.is_array()) fail("followers", "expected an array");
    for (std::size_t i = 0; i < followers.size(); ++i) {
        const std::string context = "followers[" + std::to_string(i) + "]";
        const json& fj = followers[i];
        FollowerSetup follower;
        follower.c = parse_matrix(field(fj, "c", context), context + ".c", base_dir);
        follower.d = parse_matrix(field(fj, "d", context), context + ".d", base_dir);
        const json& dj = field(fj, "data", context);
        follower.data.u_minus = parse_matrix(field(dj, "u_minus", context + ".data"),
                                             context + ".data.u_minus", base_dir);
        follower.data.x_full = parse_matrix(field(dj, "x_full", context + ".data"),
                                            context + ".data.x_full", base_dir);
        if (dj.contains("w_minus"))
            follower.data.w_minus =
                parse_matrix(dj["w_minus"], context + ".data.w_minus", base_dir);
        else
            follower.data.w_minus = Matrix(0, follower.data.u_minus.cols());
        if (fj.contains("true_model")) {
            const json& tj = fj["true_model"];
            const std::string tcontext = context + ".true_model";
            TrueSystem sys;
            sys.a = parse_matrix(field(tj, "a", tcontext), tcontext + ".a", base_dir);
            sys.b = parse_matrix(field(tj, "b", tcontext), tcontext + ".b", base_dir);
            sys.e = tj.contains("e")
                        ? parse_matrix(tj["e"], tcontext + ".e", base_dir)
                        : Matrix(sys.a.rows(), 0);
            sys.c = follower.c;
            sys.d = follower.d;
            follower.true_model = std::move(sys);
        }
        scenario.followers.push_back(std::move(follower));
    }

    try {
        validate_scenario(scenario);
    } catch (const std::invalid_argument& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return scenario;
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    json doc;
    doc["leader"] = leader_to_json(scenario.leader);
    doc["graph"] = graph_to_json(scenario.graph);
    json followers = json::array();
    for (const FollowerSetup& f : scenario.followers) {
        json fj{{"c", matrix_to_json(f.c)},
                {"d", matrix_to_json(f.d)},
                {"data",
                 json{{"u_minus", matrix_to_json(f.data.u_minus)},
                      {"x_full", matrix_to_json(f.data.x_full)}}}};
        if (f.data.disturbance_dim() > 0)
            fj["data"]["w_minus"] = matrix_to_json(f.data.w_minus);
        if (f.true_model) {
            fj["true_model"] = json{{"a", matrix_to_json(f.true_model->a)},
                                    {"b", matrix_to_json(f.true_model->b)}};
            if (f.true_model->e.cols() > 0)
                fj["true_model"]["e"] = matrix_to_json(f.true_model->e);
        }
        followers.push_back(std::move(fj));
    }
    doc["followers"] = std::move(followers);
    write_json_file(doc, path);
}

void save_protocol(const ProtocolGains& protocol, const std::filesystem::path& path) {
    json doc;
    doc["f"] = matrix_to_json(protocol.f);
    json eigs = json::array();
    for (const Complex& lam : protocol.coupling_eigs)
        eigs.push_back(json{{"re", lam.real()}, {"im", lam.imag()}});
    doc["coupling_eigenvalues"] = std::move(eigs);
    doc["leader"] = leader_to_json(protocol.leader);
    doc["graph"] = graph_to_json(protocol.graph);
    json followers = json::array();
    for (const FollowerGains& g : protocol.followers) {
        followers.push_back(json{
            {"k", matrix_to_json(g.k_gain)},
            {"pi", matrix_to_json(g.pi)},
            {"gamma", matrix_to_json(g.gamma)},
            {"theta", matrix_to_json(g.theta)},
            {"m", matrix_to_json(g.m_sol)},
            {"rho", g.rho},
            {"residuals", json{{"dynamics", g.residual_dynamics},
                               {"disturbance", g.residual_disturbance},
                               {"output", g.residual_output}}}});
    }
    doc["followers"] = std::move(followers);
    write_json_file(doc, path);
}

ProtocolGains load_protocol(const std::filesystem::path& path) {
    const json doc = load_json_file(path);
    const std::filesystem::path base_dir = path.parent_path();
    ProtocolGains protocol;
    protocol.f = parse_matrix(field(doc, "f", "f"), "f", base_dir);
    const json& eigs = field(doc, "coupling_eigenvalues", "coupling_eigenvalues");
    if (!eigs.is_array()) fail("coupling_eigenvalues", "expected an array");
    for (const json& e : eigs)
        protocol.coupling_eigs.emplace_back(
            field(e, "re", "coupling_eigenvalues").get<double>(),
            field(e, "im", "coupling_eigenvalues").get<double>());
    protocol.leader = parse_leader(field(doc, "leader", "leader"), "leader", base_dir);
    protocol.graph = parse_graph(field(doc, "graph", "graph"), "graph", base_dir);
    const json& followers = field(doc, "followers", "followers");
    if (!followers.is_array()) fail("followers", "expected an array");
    for (std::size_t i = 0; i < followers.size(); ++i) {
        const std::string context = "followers[" + std::to_string(i) + "]";
        const json& fj = followers[i];
        FollowerGains g;
        g.k_gain = parse_matrix(field(fj, "k", context), context + ".k", base_dir);
        g.pi = parse_matrix(field(fj, "pi", context), context + ".pi", base_dir);
        g.gamma = parse_matrix(field(fj, "gamma", context), context + ".gamma", base_dir);
        g.theta = parse_matrix(field(fj, "theta", context), context + ".theta", base_dir);
        g.m_sol = parse_matrix(field(fj, "m", context), context + ".m", base_dir);
        g.rho = field(fj, "rho", context).get<double>();
        const json& res = field(fj, "residuals", context);
        g.residual_dynamics = field(res, "dynamics", context).get<double>();
        g.residual_disturbance = field(res, "disturbance", context).get<double>();
        g.residual_output = field(res, "output", context).get<double>();
        protocol.followers.push_back(std::move(g));
    }
    return protocol;
}

void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    // header
    out << "k";
    for (std::size_t i = 0; i < trace.leader_states.rows(); ++i) out << ",xr_" << i;
    for (std::size_t i = 0; i < trace.leader_outputs.rows(); ++i) out << ",yr_" << i;
    for (std::size_t f = 0; f < trace.outputs.size(); ++f) {
        for (std::size_t i = 0; i < trace.controller_states[f].rows(); ++i)
            out << ",f" << f + 1 << "_v_" << i;
        for (std::size_t i = 0; i < trace.follower_states[f].rows(); ++i)
            out << ",f" << f + 1 << "_x_" << i;
        for (std::size_t i = 0; i < trace.inputs[f].rows(); ++i)
            out << ",f" << f + 1 << "_u_" << i;
        for (std::size_t i = 0; i < trace.outputs[f].rows(); ++i)
            out << ",f" << f + 1 << "_y_" << i;
    }
    out << '\n';
    for (std::size_t k = 0; k <= trace.horizon; ++k) {
        out << k;
        const auto emit = [&](const Matrix& m) {
            for (std::size_t i = 0; i < m.rows(); ++i)
                out << ',' << format_double(m(i, k));
        };
        emit(trace.leader_states);
        emit(trace.leader_outputs);
        for (std::size_t f = 0; f < trace.outputs.size(); ++f) {
            emit(trace.controller_states[f]);
            emit(trace.follower_states[f]);
            emit(trace.inputs[f]);
            emit(trace.outputs[f]);
        }
        out << '\n';
    }
}

}  // namespace ddsync
