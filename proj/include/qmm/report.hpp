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

#ifndef QMM_REPORT_HPP
#define QMM_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace qmm {

enum class Verdict { Pass, Fail, Skipped };

inline const char *verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass:
            return "pass";
        case Verdict::Fail:
            return "fail";
        case Verdict::Skipped:
            return "skipped";
    }
    return "?";
}

struct CheckRecord {
    std::string name;
    double residual = 0;
    double tolerance = 0;
    Verdict verdict = Verdict::Pass;
    std::string note;
    double seconds = 0;

    static CheckRecord judge(std::string name, double residual, double tolerance, std::string note = "") {
        CheckRecord r;
        r.name = std::move(name);
        r.residual = residual;
        r.tolerance = tolerance;
        // NaN never passes.
        r.verdict = residual <= tolerance ? Verdict::Pass : Verdict::Fail;
        r.note = std::move(note);
        return r;
    }
    static CheckRecord skipped(std::string name, std::string note) {
        CheckRecord r;
        r.name = std::move(name);
        r.residual = std::numeric_limits<double>::quiet_NaN();
        r.verdict = Verdict::Skipped;
        r.note = std::move(note);
        return r;
    }
    bool passed() const {
        return verdict != Verdict::Fail;
    }
};

struct Report {
    std::vector<CheckRecord> records;

    void add(CheckRecord r) {
        records.push_back(std::move(r));
    }
    void append(const Report &other) {
        records.insert(records.end(), other.records.begin(), other.records.end());
    }
    bool pass() const {
        return std::all_of(records.begin(), records.end(), [](const CheckRecord &r) { return r.passed(); });
    }
    const CheckRecord *find(const std::string &name) const {
        for (const auto &r : records) {
            if (r.name == name) {
                return &r;
            }
        }
        return nullptr;
    }
    double max_residual() const {
        double m = 0;
        for (const auto &r : records) {
            if (r.verdict != Verdict::Skipped) {
                m = std::isnan(r.residual) ? r.residual : std::max(m, r.residual);
            }
        }
        return m;
    }
};

}  // namespace qmm

#endif
