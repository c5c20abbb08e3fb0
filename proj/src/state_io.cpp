#include "qdisc/state_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qdisc {

namespace {

using nlohmann::json;

std::vector<double> read_block(const json &doc, const char *key, std::size_t dim) {
    if (!doc.contains(key) || !doc[key].is_array() || doc[key].size() != dim) {
        std::ostringstream ss;
        ss << "state file: '" << key << "' must be a " << dim << "x" << dim << " array";
        throw Error(ss.str());
    }
    std::vector<double> out;
    out.reserve(dim * dim);
    for (const auto &row : doc[key]) {
        if (!row.is_array() || row.size() != dim) {
            std::ostringstream ss;
            ss << "state file: every row of '" << key << "' must have " << dim << " entries";
            throw Error(ss.str());
        }
        for (const auto &v : row) {
            if (!v.is_number()) {
                throw Error(std::string("state file: non-numeric entry in '") + key + "'");
            }
            out.push_back(v.get<double>());
        }
    }
    return out;
}

}  // namespace

StateFile parse_state_json(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(std::string("state file: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dims") || !doc["dims"].is_array() ||
        doc["dims"].size() != 2 || !doc["dims"][0].is_number_unsigned() ||
        !doc["dims"][1].is_number_unsigned()) {
        throw Error("state file: 'dims' must be [m, n] with positive integers");
    }
    const Dims dims{doc["dims"][0].get<std::size_t>(), doc["dims"][1].get<std::size_t>()};
    if (dims.a == 0 || dims.b == 0 || dims.total() > 16) {
        throw Error("state file: dims must be positive with m*n <= 16");
    }
    const auto re = read_block(doc, "re", dims.total());
    const auto im = read_block(doc, "im", dims.total());
    std::vector<Complex> entries(re.size());
    for (std::size_t i = 0; i < re.size(); i++) {
        entries[i] = Complex(re[i], im[i]);
    }
    return {dims, ComplexMatrix(dims.total(), dims.total(), std::move(entries))};
}

StateFile read_state_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open state file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_state_json(ss.str());
}

DensityMatrix load_density_matrix(const std::string &path, double tol) {
    const auto f = read_state_file(path);
    return {f.matrix, f.dims, tol};
}

std::string to_state_json(const ComplexMatrix &matrix, Dims dims) {
    json re = json::array();
    json im = json::array();
    for (std::size_t r = 0; r < matrix.rows(); r++) {
        json rr = json::array();
        json ri = json::array();
        for (std::size_t c = 0; c < matrix.cols(); c++) {
            rr.push_back(matrix(r, c).real());
            ri.push_back(matrix(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    json doc = {{"dims", {dims.a, dims.b}}, {"re", re}, {"im", im}};
    return doc.dump(2) + "\n";
}

void write_state_file(const std::string &path, const DensityMatrix &rho) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write state file '" + path + "'");
    }
    out << to_state_json(rho.matrix(), rho.dims());
}

}  // namespace qdisc
