#include "kyt/io.hpp"

#include "kyt/error.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace kyt {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "' for reading");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput("'" + path + "': " + e.what());
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw InvalidInput("failed writing '" + path + "'");
}

const json& at_path(const json& j, const std::string& pointer) {
    try {
        return j.at(json::json_pointer(pointer));
    } catch (const json::exception&) {
        throw InvalidInput("missing or malformed field at '" + pointer + "'");
    }
}

std::vector<int> int_triple(const json& j, const std::string& pointer) {
    const json& field = at_path(j, pointer);
    if (!field.is_array() || field.size() != 3) {
        throw InvalidInput("'" + pointer + "': expected an array of 3 integers");
    }
    std::vector<int> out;
    for (const auto& v : field) {
        if (!v.is_number_integer() || v.get<long long>() < 1) {
            throw InvalidInput("'" + pointer + "': entries must be positive integers");
        }
        out.push_back(v.get<int>());
    }
    return out;
}

MatrixXd matrix_from_json(const json& j, const std::string& pointer, Index rows,
                          Index cols) {
    if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
        throw InvalidInput("'" + pointer + "': expected " + std::to_string(rows) +
                           " rows");
    }
    MatrixXd m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw InvalidInput("'" + pointer + "/" + std::to_string(i) + "': expected " +
                               std::to_string(cols) + " numbers");
        }
        for (Index k = 0; k < cols; ++k) {
            const json& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                throw InvalidInput("'" + pointer + "/" + std::to_string(i) + "/" +
                                   std::to_string(k) + "': expected a finite number");
            }
            m(i, k) = v.get<double>();
        }
    }
    return m;
}

json matrix_to_json(const MatrixXd& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

Tensor3 load_tensor(const std::string& path) {
    const json j = load_json_file(path);
    const std::vector<int> dims = int_triple(j, "/dims");
    const json& data = at_path(j, "/data");
    if (!data.is_array()) throw InvalidInput("'/data': expected an array");
    std::vector<double> entries;
    entries.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const json& v = data[i];
        if (!v.is_number()) {
            throw InvalidInput("'/data/" + std::to_string(i) + "': expected a number");
        }
        entries.push_back(v.get<double>());
    }
    try {
        return Tensor3::from_data(dims[0], dims[1], dims[2], std::move(entries));
    } catch (const InvalidInput& e) {
        throw InvalidInput("'" + path + "': " + e.what());
    }
}

void save_tensor(const std::string& path, const Tensor3& t) {
    json j;
    j["dims"] = {t.n1(), t.n2(), t.n3()};
    j["data"] = t.data();
    write_file(path, j.dump());
}

CpDecomposition load_cp(const std::string& path) {
    const json j = load_json_file(path);
    const std::vector<int> dims = int_triple(j, "/dims");
    const json& r_field = at_path(j, "/r");
    if (!r_field.is_number_integer() || r_field.get<long long>() < 0) {
        throw InvalidInput("'/r': expected a nonnegative integer");
    }
    const auto r = static_cast<Index>(r_field.get<int>());
    CpDecomposition d;
    d.A = matrix_from_json(at_path(j, "/A"), "/A", dims[0], r);
    d.B = matrix_from_json(at_path(j, "/B"), "/B", dims[1], r);
    d.C = matrix_from_json(at_path(j, "/C"), "/C", dims[2], r);
    try {
        d.validate();
    } catch (const InvalidInput& e) {
        throw InvalidInput("'" + path + "': " + e.what());
    }
    return d;
}

void save_cp(const std::string& path, const CpDecomposition& d) {
    json j;
    j["r"] = d.rank();
    j["dims"] = {d.n1(), d.n2(), d.n3()};
    j["A"] = matrix_to_json(d.A);
    j["B"] = matrix_to_json(d.B);
    j["C"] = matrix_to_json(d.C);
    write_file(path, j.dump());
}

std::vector<MatrixXd> load_matrix_list(const std::string& path) {
    const json j = load_json_file(path);
    const json& list = at_path(j, "/matrices");
    if (!list.is_array() || list.empty()) {
        throw InvalidInput("'/matrices': expected a nonempty array");
    }
    const json& first = list[0];
    if (!first.is_array() || first.empty()) {
        throw InvalidInput("'/matrices/0': expected a matrix");
    }
    const auto d = static_cast<Index>(first.size());
    std::vector<MatrixXd> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        out.push_back(
            matrix_from_json(list[i], "/matrices/" + std::to_string(i), d, d));
    }
    return out;
}

void save_matrix_list(const std::string& path, const std::vector<MatrixXd>& matrices,
                      const std::string& dim_key) {
    json j;
    j["m"] = matrices.size();
    if (!matrices.empty()) j[dim_key] = matrices[0].rows();
    json list = json::array();
    for (const MatrixXd& m : matrices) list.push_back(matrix_to_json(m));
    j["matrices"] = std::move(list);
    write_file(path, j.dump());
}

std::string to_json_string(const RankReport& report) {
    json j;
    j["flattening_rank"] = report.flattening_rank;
    j["divisor"] = report.divisor;
    if (report.detected_rank) {
        j["detected_rank"] = *report.detected_rank;
    } else {
        j["detected_rank"] = nullptr;
    }
    j["certified_lower_bound"] = report.certified_lower_bound;
    j["p"] = report.p;
    j["q"] = report.q;
    j["theorem_bound"] = finite_or_null(report.theorem_bound);
    j["within_guarantee"] = report.within_guarantee;
    return j.dump(2);
}

std::string to_json_string(const UniquenessCertificate& cert) {
    json j;
    j["p"] = cert.p;
    j["q"] = cert.q;
    j["prefix_overlap"] = cert.prefix_overlap;
    j["r"] = cert.r;
    j["overall"] = cert.overall;
    json conditions = json::array();
    for (const ConditionRecord& c : cert.conditions) {
        json item;
        item["label"] = c.label;
        item["name"] = c.name;
        item["pass"] = c.pass;
        item["measured"] = finite_or_null(c.measured);
        item["required"] = finite_or_null(c.required);
        if (!c.note.empty()) item["note"] = c.note;
        conditions.push_back(std::move(item));
    }
    j["conditions"] = std::move(conditions);
    j["regime"] = {{"alpha", cert.regime.alpha},
                   {"q_required", cert.regime.q_required},
                   {"r_bound", cert.regime.r_bound},
                   {"within", cert.regime.within}};
    return j.dump(2);
}

std::string to_json_string(const ExtensionReport& report) {
    json j;
    j["commutator_residual"] = report.commutator_residual;
    j["extension_residual"] = report.extension_residual;
    j["pass"] = report.pass;
    return j.dump(2);
}

std::string to_json_string(const DecomposeReport& report) {
    json j;
    j["p"] = report.p;
    j["q"] = report.q;
    j["r_used"] = report.r_used;
    j["r_was_given"] = report.r_was_given;
    j["flattening_rank_standard"] = report.flattening_rank_standard;
    j["flattening_rank_swapped"] = report.flattening_rank_swapped;
    if (report.detected_rank) {
        j["detected_rank"] = *report.detected_rank;
    } else {
        j["detected_rank"] = nullptr;
    }
    j["detection_discrepancy"] = report.detection_discrepancy;
    j["reconstruction_residual"] = report.reconstruction_residual;
    j["pairing"] = report.pairing;
    return j.dump(2);
}

void save_text(const std::string& path, const std::string& content) {
    write_file(path, content);
}

void save_flattening_dump(const std::string& matrix_path, const std::string& maps_path,
                          const FlatteningMatrix& flat) {
    json m;
    m["rows"] = flat.matrix.rows();
    m["cols"] = flat.matrix.cols();
    json data = json::array();
    for (Index i = 0; i < flat.matrix.rows(); ++i)
        for (Index k = 0; k < flat.matrix.cols(); ++k) data.push_back(flat.matrix(i, k));
    m["data"] = std::move(data);
    write_file(matrix_path, m.dump());

    json maps;
    maps["p"] = flat.p;
    maps["q"] = flat.q;
    maps["mode"] = flat.mode == FlatteningMode::standard ? "standard" : "swapped";
    json row_map = json::array();
    for (Index i = 0; i < flat.matrix.rows(); ++i) {
        const auto [subset, coord] = flat.row_label(i);
        row_map.push_back({{"subset", subset}, {"coord", coord}});
    }
    json col_map = json::array();
    for (Index k = 0; k < flat.matrix.cols(); ++k) {
        const auto [subset, coord] = flat.col_label(k);
        col_map.push_back({{"subset", subset}, {"coord", coord}});
    }
    maps["row_map"] = std::move(row_map);
    maps["col_map"] = std::move(col_map);
    write_file(maps_path, maps.dump());
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "n1,n2,n3,q,p,r,seed,flattening_rank,expected_rank,additive,wall_ms\n";
    for (const SweepRow& row : result.rows) {
        out << row.dims[0] << ',' << row.dims[1] << ',' << row.dims[2] << ',' << row.q
            << ',' << row.p << ',' << row.r << ',' << row.seed_index << ','
            << row.flattening_rank << ',' << row.expected_rank << ','
            << (row.additive ? 1 : 0) << ',' << row.wall_ms << '\n';
    }
    return out.str();
}

std::string sweep_summary_text(const SweepResult& result) {
    std::ostringstream out;
    for (const SweepSummary& s : result.summaries) {
        out << "dims (" << s.dims[0] << "," << s.dims[1] << "," << s.dims[2] << ") q="
            << s.q << ": max additive r = " << s.max_additive_r << '\n';
    }
    return out.str();
}

} // namespace kyt
