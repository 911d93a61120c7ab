#include "pcfl/data/off_io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pcfl/common.hpp"

namespace pcfl::data {

namespace {

/// Pulls whitespace-separated tokens, skipping '#' comments to end of line.
class TokenStream {
public:
    explicit TokenStream(std::istream& is) : is_(is) {}

    bool next(std::string& tok) {
        while (true) {
            if (!(is_ >> tok)) return false;
            if (tok[0] == '#') {
                std::string rest;
                std::getline(is_, rest);
                continue;
            }
            return true;
        }
    }

private:
    std::istream& is_;
};

long parse_count(const std::string& tok, const char* what) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(tok, &pos);
    } catch (const std::exception&) {
        throw DataError(std::string("malformed OFF header: bad ") + what + " '" + tok + "'");
    }
    if (pos != tok.size() || v < 0)
        throw DataError(std::string("malformed OFF header: bad ") + what + " '" + tok + "'");
    return v;
}

double parse_real(const std::string& tok, const char* what) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw DataError(std::string("malformed OFF file: bad ") + what + " '" + tok + "'");
    }
    if (pos != tok.size() || !std::isfinite(v))
        throw DataError(std::string("malformed OFF file: bad ") + what + " '" + tok + "'");
    return v;
}

}  // namespace

Mesh load_off_mesh(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw DataError("cannot open mesh file: " + path.string());
    TokenStream ts(file);

    std::string tok;
    if (!ts.next(tok)) throw DataError("malformed OFF header: empty file " + path.string());
    long v_count = -1;
    if (tok == "OFF") {
        if (!ts.next(tok)) throw DataError("malformed OFF header: missing counts");
        v_count = parse_count(tok, "vertex count");
    } else if (tok.rfind("OFF", 0) == 0 && tok.size() > 3 &&
               std::isdigit(static_cast<unsigned char>(tok[3]))) {
        // Counts glued to the keyword, as in some ModelNet files.
        v_count = parse_count(tok.substr(3), "vertex count");
    } else {
        throw DataError("malformed OFF header in " + path.string() + ": '" + tok + "'");
    }
    if (!ts.next(tok)) throw DataError("malformed OFF header: missing face count");
    const long f_count = parse_count(tok, "face count");
    if (!ts.next(tok)) throw DataError("malformed OFF header: missing edge count");
    parse_count(tok, "edge count");  // present but unused
    if (v_count < 1) throw DataError("malformed OFF header: zero vertices");

    Mesh mesh;
    mesh.vertices.resize(v_count, 3);
    for (long i = 0; i < v_count; ++i) {
        for (int c = 0; c < 3; ++c) {
            if (!ts.next(tok)) throw DataError("unexpected end of OFF vertex list");
            mesh.vertices(i, c) = parse_real(tok, "vertex coordinate");
        }
    }

    std::vector<Eigen::Vector3i> tris;
    tris.reserve(f_count);
    for (long f = 0; f < f_count; ++f) {
        if (!ts.next(tok)) throw DataError("unexpected end of OFF face list");
        const long m = parse_count(tok, "face vertex count");
        if (m < 3) throw DataError("face with fewer than 3 vertices in " + path.string());
        std::vector<long> idx(m);
        for (long j = 0; j < m; ++j) {
            if (!ts.next(tok)) throw DataError("unexpected end of OFF face list");
            idx[j] = parse_count(tok, "face index");
            if (idx[j] >= v_count)
                throw DataError("index out of range in " + path.string() + ": " +
                                std::to_string(idx[j]) + " >= " + std::to_string(v_count));
        }
        for (long j = 1; j + 1 < m; ++j)
            tris.emplace_back(static_cast<int>(idx[0]), static_cast<int>(idx[j]),
                              static_cast<int>(idx[j + 1]));
    }
    mesh.faces.resize(static_cast<Eigen::Index>(tris.size()), 3);
    for (std::size_t t = 0; t < tris.size(); ++t) mesh.faces.row(static_cast<Eigen::Index>(t)) = tris[t];
    return mesh;
}

}  // namespace pcfl::data
