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

#ifndef QMM_LATTICE_HPP
#define QMM_LATTICE_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace qmm {

/// A cell of the coarse-grained lattice.
///
/// Ordering is the canonical one: y ascending, then x ascending.
struct Site {
    int x = 0;
    int y = 0;

    bool operator==(const Site &other) const = default;
    std::strong_ordering operator<=>(const Site &other) const {
        if (auto c = y <=> other.y; c != 0) {
            return c;
        }
        return x <=> other.x;
    }
};

inline std::ostream &operator<<(std::ostream &out, const Site &s) {
    return out << "(" << s.x << "," << s.y << ")";
}

struct Translation {
    int dx = 0;
    int dy = 0;

    bool operator==(const Translation &other) const = default;
    Translation operator*(const Translation &other) const {
        return {dx + other.dx, dy + other.dy};
    }
    Translation inverse() const {
        return {-dx, -dy};
    }
    Site operator()(const Site &s) const {
        return {s.x + dx, s.y + dy};
    }
};

/// A finite set of sites, always stored in canonical order.
class Region {
   public:
    Region() = default;
    Region(std::initializer_list<Site> sites) : sites_(sites) {
        normalize();
    }
    explicit Region(std::vector<Site> sites) : sites_(std::move(sites)) {
        normalize();
    }

    const std::vector<Site> &sites() const {
        return sites_;
    }
    size_t size() const {
        return sites_.size();
    }
    bool empty() const {
        return sites_.empty();
    }
    const Site &operator[](size_t k) const {
        return sites_[k];
    }
    auto begin() const {
        return sites_.begin();
    }
    auto end() const {
        return sites_.end();
    }

    bool contains(const Site &s) const {
        return std::binary_search(sites_.begin(), sites_.end(), s);
    }
    bool contains(const Region &other) const {
        return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end());
    }
    bool disjoint(const Region &other) const;

    /// Position of `s` in canonical order, or -1.
    int index_of(const Site &s) const {
        auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
        if (it == sites_.end() || *it != s) {
            return -1;
        }
        return (int)(it - sites_.begin());
    }

    int min_x() const;
    int max_x() const;
    int min_y() const;
    int max_y() const;
    int width() const {
        return empty() ? 0 : max_x() - min_x() + 1;
    }
    int height() const {
        return empty() ? 0 : max_y() - min_y() + 1;
    }

    Region translated(const Translation &t) const {
        std::vector<Site> out;
        out.reserve(sites_.size());
        for (const auto &s : sites_) {
            out.push_back(t(s));
        }
        return Region(std::move(out));
    }

    bool operator==(const Region &other) const = default;

    std::string str() const;

   private:
    void normalize() {
        std::sort(sites_.begin(), sites_.end());
        sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
    }
    std::vector<Site> sites_;
};

inline int Region::min_x() const {
    int r = sites_.front().x;
    for (const auto &s : sites_) {
        r = std::min(r, s.x);
    }
    return r;
}
inline int Region::max_x() const {
    int r = sites_.front().x;
    for (const auto &s : sites_) {
        r = std::max(r, s.x);
    }
    return r;
}
inline int Region::min_y() const {
    return sites_.front().y;
}
inline int Region::max_y() const {
    return sites_.back().y;
}

inline Region region_union(const Region &a, const Region &b) {
    std::vector<Site> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return Region(std::move(out));
}
inline Region region_intersection(const Region &a, const Region &b) {
    std::vector<Site> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return Region(std::move(out));
}
inline Region region_difference(const Region &a, const Region &b) {
    std::vector<Site> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return Region(std::move(out));
}
inline Region operator|(const Region &a, const Region &b) {
    return region_union(a, b);
}
inline Region operator&(const Region &a, const Region &b) {
    return region_intersection(a, b);
}
inline Region operator-(const Region &a, const Region &b) {
    return region_difference(a, b);
}
inline bool Region::disjoint(const Region &other) const {
    return (*this & other).empty();
}

inline std::string Region::str() const {
    std::string out = "{";
    for (size_t k = 0; k < sites_.size(); k++) {
        if (k) {
            out += ",";
        }
        out += "(" + std::to_string(sites_[k].x) + "," + std::to_string(sites_[k].y) + ")";
    }
    return out + "}";
}

inline std::ostream &operator<<(std::ostream &out, const Region &r) {
    return out << r.str();
}

/// A region up to translation. Offsets are relative to the anchor, which is the
/// bottom-right cell of the bounding box; every offset therefore has dx <= 0, dy >= 0.
class Shape {
   public:
    Shape() = default;

    /// Builds a shape from cells given in any frame. The frame is discarded.
    static Shape from_cells(std::vector<Site> cells) {
        Region r(std::move(cells));
        Shape s;
        if (r.empty()) {
            return s;
        }
        Translation t{-r.max_x(), -r.min_y()};
        s.offsets_ = r.translated(t);
        return s;
    }
    static Shape of(const Region &r) {
        return from_cells(r.sites());
    }
    /// A w-wide, h-tall block.
    static Shape rect(int w, int h) {
        std::vector<Site> cells;
        for (int y = 0; y < h; y++) {
            for (int x = 0; x < w; x++) {
                cells.push_back({x, y});
            }
        }
        return from_cells(std::move(cells));
    }

    const Region &offsets() const {
        return offsets_;
    }
    size_t size() const {
        return offsets_.size();
    }
    int width() const {
        return offsets_.width();
    }
    int height() const {
        return offsets_.height();
    }
    bool operator==(const Shape &other) const = default;
    bool operator<(const Shape &other) const {
        return offsets_.sites() < other.offsets_.sites();
    }

   private:
    Region offsets_;
};

inline Region anchor(const Shape &shape, const Site &site) {
    return shape.offsets().translated({site.x, site.y});
}

/// The site a region is anchored at (bottom-right cell of its bounding box).
inline Site anchor_of(const Region &r) {
    return {r.max_x(), r.min_y()};
}

/// Every anchor `a` with anchor(sub, a) inside anchor(container, (0,0)), in canonical order.
inline std::vector<Site> enumerate_subshapes(const Shape &container, const Shape &sub) {
    std::vector<Site> out;
    if (sub.size() == 0 || container.size() == 0) {
        return out;
    }
    const Region &c = container.offsets();
    const Region &s = sub.offsets();
    // Anchors range so that the sub bounding box stays inside the container box.
    for (int ay = c.min_y() - s.min_y(); ay <= c.max_y() - s.max_y(); ay++) {
        for (int ax = c.min_x() - s.min_x(); ax <= c.max_x() - s.max_x(); ax++) {
            Site a{ax, ay};
            if (c.contains(anchor(sub, a))) {
                out.push_back(a);
            }
        }
    }
    return out;
}

/// A w-wide, h-tall block whose bottom-left cell is (x, y).
struct Block {
    int w;
    int h;
    int x;
    int y;
};

/// Union of blocks in picture coordinates (bottom-left cell of each block given).
inline Region blocks(std::initializer_list<Block> bs) {
    std::vector<Site> cells;
    for (const auto &b : bs) {
        for (int y = b.y; y < b.y + b.h; y++) {
            for (int x = b.x; x < b.x + b.w; x++) {
                cells.push_back({x, y});
            }
        }
    }
    return Region(std::move(cells));
}

/// The n-wide, m-tall block with bottom-left cell (x0, y0).
inline Region window(int x0, int y0, int n, int m) {
    return blocks({{n, m, x0, y0}});
}

namespace shapes {

inline Shape s11() {
    return Shape::rect(1, 1);
}
inline Shape s21() {
    return Shape::rect(2, 1);
}
inline Shape s12() {
    return Shape::rect(1, 2);
}
inline Shape s22() {
    return Shape::rect(2, 2);
}
inline Shape s31() {
    return Shape::rect(3, 1);
}
inline Shape s13() {
    return Shape::rect(1, 3);
}
inline Shape s32() {
    return Shape::rect(3, 2);
}
inline Shape s23() {
    return Shape::rect(2, 3);
}
inline Shape s33() {
    return Shape::rect(3, 3);
}
/// {(0,0),(1,0),(0,1)}
inline Shape l_tromino() {
    return Shape::from_cells({{0, 0}, {1, 0}, {0, 1}});
}
/// {(0,0),(1,0),(1,-1)}
inline Shape skew_tromino() {
    return Shape::from_cells({{0, 0}, {1, 0}, {1, -1}});
}
/// 3x2 block with a 2x1 domino on top of its left two columns.
inline Shape type1_staircase() {
    return Shape::of(blocks({{3, 2, 0, 0}, {2, 1, 0, 2}}));
}
/// 3x2 block with a 2x1 domino below its right two columns.
inline Shape type2_staircase() {
    return Shape::of(blocks({{3, 2, 0, 1}, {2, 1, 1, 0}}));
}

struct Named {
    const char *name;
    Shape shape;
};

inline std::vector<Named> catalog() {
    return {
        {"1x1", s11()},
        {"2x1", s21()},
        {"1x2", s12()},
        {"2x2", s22()},
        {"3x1", s31()},
        {"1x3", s13()},
        {"3x2", s32()},
        {"2x3", s23()},
        {"3x3", s33()},
        {"l_tromino", l_tromino()},
        {"skew_tromino", skew_tromino()},
        {"type1_staircase", type1_staircase()},
        {"type2_staircase", type2_staircase()},
    };
}

}  // namespace shapes

}  // namespace qmm

#endif
