// Copyright 2026 The qmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMM_IO_HPP
#define QMM_IO_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qmm/densop.hpp"
#include "qmm/report.hpp"

namespace qmm {

constexpr const char *QMM_VERSION = "0.1.0";

/// Input or schema problem; maps to exit code 2.
class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// %.17g, which round-trips every double.
inline std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// %.12g, for printed scalars. Negative zero prints as zero.
inline std::string format12(double v) {
    if (v == 0) {
        v = 0;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Fixed notation, 12 digits after the point, as printed by the CLI.
inline std::string format_scalar(double v) {
    if (std::abs(v) < 5e-13) {
        v = 0;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

/// Writes `content` to `path` through a temporary file and a rename.
inline void write_atomic(const std::string &path, const std::string &content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw InputError("cannot write " + tmp);
        }
        f << content;
        if (!f) {
            throw InputError("write failed for " + tmp);
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw InputError("cannot rename " + tmp + " to " + path + ": " + ec.message());
    }
}

inline std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw InputError("cannot read " + path);
    }
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

/// FNV-1a 64, hex.
inline std::string digest(const std::string &bytes) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

inline std::string region_json(const Region &r) {
    std::string out = "[";
    for (size_t k = 0; k < r.size(); k++) {
        out += (k ? ",[" : "[") + std::to_string(r[k].x) + "," + std::to_string(r[k].y) + "]";
    }
    return out + "]";
}

/// Serialized matrix file. `extra` holds additional top-level members, already JSON encoded.
inline std::string matrix_file_json(const Region &region, int d, const Matrix &m, const std::string &extra = "") {
    std::string out;
    out.reserve((size_t)m.size() * 48 + 256);
    out += "{\n  \"site_dimension\": " + std::to_string(d) + ",\n  \"entropy_base\": 2,\n  \"region\": " + region_json(region) +
           ",\n";
    if (!extra.empty()) {
        out += extra + ",\n";
    }
    out += "  \"matrix\": {\n    \"dim\": " + std::to_string(m.rows()) + ",\n    \"data\": [";
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        out += i ? ",\n      " : "\n      ";
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            const cplx v = m(i, j);
            out += (j ? ",[" : "[") + format17(v.real()) + "," + format17(v.imag()) + "]";
        }
    }
    out += "\n    ]\n  }\n}\n";
    return out;
}

inline std::string marginal_file_json(const DensityOperator &rho, const std::string &extra = "") {
    return matrix_file_json(rho.region(), rho.site_dimension(), rho.matrix(), extra);
}

struct MatrixFile {
    Region region;
    int site_dimension;
    Matrix matrix;
};

inline MatrixFile parse_matrix_file(const std::string &text, const std::string &origin = "<input>") {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception &e) {
        throw InputError(origin + ": malformed JSON: " + e.what());
    }
    try {
        MatrixFile f;
        f.site_dimension = j.at("site_dimension").get<int>();
        if (f.site_dimension < 1) {
            throw InputError(origin + ": site_dimension must be positive");
        }
        if (j.contains("entropy_base") && j.at("entropy_base").get<int>() != 2) {
            throw InputError(origin + ": entropy_base must be 2");
        }
        std::vector<Site> sites;
        for (const auto &p : j.at("region")) {
            if (p.size() != 2) {
                throw InputError(origin + ": region entries must be [x, y] pairs");
            }
            sites.push_back({p[0].get<int>(), p[1].get<int>()});
        }
        f.region = Region(sites);
        if (f.region.size() != sites.size()) {
            throw InputError(origin + ": duplicate sites in region");
        }
        if (ipow((size_t)f.site_dimension, f.region.size()) > MAX_DIM) {
            throw InputError(origin + ": SizeCapExceeded");
        }
        const auto &mj = j.at("matrix");
        const size_t dim = mj.at("dim").get<size_t>();
        if (dim != ipow((size_t)f.site_dimension, f.region.size())) {
            throw InputError(origin + ": DimensionMismatch: dim " + std::to_string(dim) + " does not match region");
        }
        const auto &data = mj.at("data");
        if (data.size() != dim * dim) {
            throw InputError(origin + ": DimensionMismatch: data has " + std::to_string(data.size()) + " entries");
        }
        f.matrix.resize((Eigen::Index)dim, (Eigen::Index)dim);
        for (size_t k = 0; k < dim * dim; k++) {
            const auto &e = data[k];
            if (e.size() != 2) {
                throw InputError(origin + ": matrix entries must be [re, im] pairs");
            }
            f.matrix((Eigen::Index)(k / dim), (Eigen::Index)(k % dim)) = cplx(e[0].get<double>(), e[1].get<double>());
        }
        return f;
    } catch (const nlohmann::json::exception &e) {
        throw InputError(origin + ": schema error: " + e.what());
    }
}

/// Reads and validates a density operator file.
inline DensityOperator read_marginal_file(const std::string &path, const Tolerances &tol = {}) {
    MatrixFile f = parse_matrix_file(read_file(path), path);
    try {
        return DensityOperator::from_matrix(f.region, f.site_dimension, f.matrix, tol);
    } catch (const Error &e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void write_marginal_file(const std::string &path, const DensityOperator &rho, const std::string &extra = "") {
    write_atomic(path, marginal_file_json(rho, extra));
}

inline nlohmann::json number_or_null(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return nullptr;
}

inline nlohmann::json report_json(const Report &rep, const Tolerances &tol, const std::map<std::string, std::string> &digests,
                                  const std::string &command) {
    nlohmann::json j;
    j["tool"] = "qmm";
    j["version"] = QMM_VERSION;
    j["command"] = command;
    j["inputs"] = digests;
    j["tolerances"] = {{"tol_herm", tol.tol_herm},
                       {"tol_trace", tol.tol_trace},
                       {"tol_psd", tol.tol_psd},
                       {"tol_entropy", tol.tol_entropy},
                       {"tol_consistency", tol.tol_consistency},
                       {"rank_cutoff", tol.rank_cutoff}};
    nlohmann::json recs = nlohmann::json::array();
    for (const auto &r : rep.records) {
        nlohmann::json x;
        x["name"] = r.name;
        x["residual"] = number_or_null(r.residual);
        x["tolerance"] = number_or_null(r.tolerance);
        x["verdict"] = verdict_name(r.verdict);
        if (!r.note.empty()) {
            x["note"] = r.note;
        }
        if (r.seconds > 0) {
            x["seconds"] = r.seconds;
        }
        recs.push_back(x);
    }
    j["records"] = recs;
    j["summary"] = rep.pass() ? "pass" : "fail";
    return j;
}

}  // namespace qmm

#endif
