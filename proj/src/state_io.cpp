#include "entlab/state_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace entlab {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

struct FilePayload {
    BipartiteDims dims;
    std::string kind;
    std::vector<Complex> data;
};

FilePayload parse_payload(const json& j, const std::string& path) {
    FilePayload payload;
    if (!j.is_object() || !j.contains("d_a") || !j.contains("d_b") || !j.contains("kind") ||
        !j.contains("data"))
        throw std::runtime_error(path + ": expected object with d_a, d_b, kind, data");
    if (!j["d_a"].is_number_integer() || !j["d_b"].is_number_integer())
        throw std::runtime_error(path + ": d_a and d_b must be integers");
    payload.dims = BipartiteDims{j["d_a"].get<int>(), j["d_b"].get<int>()};
    check_dims(payload.dims);
    payload.kind = j["kind"].get<std::string>();
    if (!j["data"].is_array()) throw std::runtime_error(path + ": data must be an array");
    payload.data.reserve(j["data"].size());
    for (const auto& entry : j["data"]) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number())
            throw std::runtime_error(path + ": data entries must be [re, im] pairs");
        payload.data.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    return payload;
}

json payload_json(const BipartiteDims& dims, const std::string& kind,
                  const std::vector<Complex>& data) {
    json j;
    j["d_a"] = dims.d_a;
    j["d_b"] = dims.d_b;
    j["kind"] = kind;
    json arr = json::array();
    for (const Complex& c : data) arr.push_back({c.real(), c.imag()});
    j["data"] = std::move(arr);
    return j;
}

Matrix to_matrix(const FilePayload& payload, const std::string& path) {
    const int n = payload.dims.total();
    if (static_cast<int>(payload.data.size()) != n * n)
        throw std::runtime_error(path + ": data length " + std::to_string(payload.data.size()) +
                                 " does not match (d_a*d_b)^2 = " + std::to_string(n * n));
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = payload.data[r * n + c];
    return m;
}

}  // namespace

PureState load_pure_state(const std::string& path) {
    const FilePayload payload = parse_payload(load_json(path), path);
    if (payload.kind != "pure") throw std::runtime_error(path + ": kind is not 'pure'");
    const int n = payload.dims.total();
    if (static_cast<int>(payload.data.size()) != n)
        throw std::runtime_error(path + ": data length does not match d_a*d_b");
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = payload.data[i];
    return make_pure_state(payload.dims, std::move(v));  // enforces the norm invariant
}

DensityMatrix load_density_matrix(const std::string& path, BipartiteDims* dims_out) {
    const FilePayload payload = parse_payload(load_json(path), path);
    if (payload.kind != "density") throw std::runtime_error(path + ": kind is not 'density'");
    if (dims_out) *dims_out = payload.dims;
    return make_density_matrix(to_matrix(payload, path));
}

BipartiteOperator load_operator(const std::string& path) {
    const FilePayload payload = parse_payload(load_json(path), path);
    if (payload.kind != "operator") throw std::runtime_error(path + ": kind is not 'operator'");
    return make_bipartite_operator(payload.dims, to_matrix(payload, path),
                                   /*require_hermitian=*/false);
}

void save_pure_state(const std::string& path, const PureState& psi) {
    std::vector<Complex> data(psi.amplitudes.data(), psi.amplitudes.data() + psi.amplitudes.size());
    atomic_write(path, payload_json(psi.dims, "pure", data).dump(2) + "\n");
}

void save_density_matrix(const std::string& path, const BipartiteDims& dims,
                         const DensityMatrix& rho) {
    std::vector<Complex> data;
    const int n = rho.dim();
    data.reserve(n * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) data.push_back(rho.entries(r, c));
    atomic_write(path, payload_json(dims, "density", data).dump(2) + "\n");
}

void save_operator(const std::string& path, const BipartiteOperator& op) {
    std::vector<Complex> data;
    const int n = op.dims.total();
    data.reserve(n * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) data.push_back(op.entries(r, c));
    atomic_write(path, payload_json(op.dims, "operator", data).dump(2) + "\n");
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string trajectory_csv(const Trajectory& trajectory) {
    std::ostringstream out;
    out << "t,norm,purity_a,linear_entropy,gamma,schmidt1,schmidt2,schmidt3,schmidt4,"
           "meanfield_fidelity\n";
    for (const TimeSeriesRecord& rec : trajectory.records) {
        out << format_double(rec.t) << ',' << format_double(rec.norm_or_trace) << ','
            << format_double(rec.purity_a) << ',' << format_double(rec.linear_entropy) << ',';
        if (rec.gamma) out << format_double(*rec.gamma);
        for (int i = 0; i < 4; ++i) {
            out << ',';
            if (i < static_cast<int>(rec.top_schmidt.size()))
                out << format_double(rec.top_schmidt[i]);
        }
        out << ',';
        if (rec.meanfield_fidelity) out << format_double(*rec.meanfield_fidelity);
        out << '\n';
    }
    return out.str();
}

void save_trajectory_csv(const std::string& path, const Trajectory& trajectory) {
    atomic_write(path, trajectory_csv(trajectory));
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace entlab
