#include "sigver/ucss.hpp"

#include <algorithm>
#include <map>

#include "sigver/errors.hpp"

namespace sigver {

const char* segment_kind_name(SegmentKind k) {
    switch (k) {
        case SegmentKind::internal: return "internal";
        case SegmentKind::extremity: return "extremity";
        case SegmentKind::isolated: return "isolated";
        case SegmentKind::cycle: return "cycle";
    }
    return "?";
}

SegmentKind parse_segment_kind(std::string_view s) {
    if (s == "internal") return SegmentKind::internal;
    if (s == "extremity") return SegmentKind::extremity;
    if (s == "isolated") return SegmentKind::isolated;
    if (s == "cycle") return SegmentKind::cycle;
    throw InputError("unknown segment kind '" + std::string(s) + "'");
}

Ucss reversed(const Ucss& s) {
    Ucss out;
    out.kind = s.kind;
    out.points.assign(s.points.rbegin(), s.points.rend());
    return out;
}

namespace {

// Clockwise from north, matching the traversal tie-break rule.
constexpr int kDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

}  // namespace

SkeletonGraph build_graph(std::vector<Pixel> pixels) {
    std::sort(pixels.begin(), pixels.end());
    pixels.erase(std::unique(pixels.begin(), pixels.end(), [](Pixel a, Pixel b) { return a == b; }),
                 pixels.end());

    SkeletonGraph g;
    g.vertices = std::move(pixels);
    const std::size_t n = g.vertices.size();
    g.neighbors.assign(n, {-1, -1, -1, -1, -1, -1, -1, -1});
    g.degree.assign(n, 0);

    std::map<Pixel, std::int32_t> index;
    for (std::size_t i = 0; i < n; ++i) index[g.vertices[i]] = static_cast<std::int32_t>(i);

    for (std::size_t i = 0; i < n; ++i) {
        const Pixel p = g.vertices[i];
        for (int k = 0; k < 8; ++k) {
            const auto it = index.find({p.x + kDx[k], p.y + kDy[k]});
            if (it != index.end()) {
                g.neighbors[i][k] = it->second;
                ++g.degree[i];
            }
        }
    }
    return g;
}

SkeletonGraph build_graph(const BinaryImage& skeleton) { return build_graph(skeleton.foreground()); }

namespace {

struct Walker {
    const SkeletonGraph& g;
    // Edge-used marks, one per directed neighbor slot; an undirected edge is
    // consumed in both directions when traversed.
    std::vector<std::array<bool, 8>> used;

    explicit Walker(const SkeletonGraph& graph) : g(graph), used(graph.size(), std::array<bool, 8>{}) {}

    int slot_of(int from, int to) const {
        for (int k = 0; k < 8; ++k) {
            if (g.neighbors[from][k] == to) return k;
        }
        return -1;
    }

    void mark(int from, int slot) {
        const int to = g.neighbors[from][slot];
        used[from][slot] = true;
        used[to][slot_of(to, from)] = true;
    }

    bool is_delimiter(int v) const { return g.degree[v] != 2; }

    // Walks from delimiter `start` through its neighbor slot `slot` until the next
    // delimiter. Interior vertices all have degree 2 by construction.
    std::vector<int> run(int start, int slot) {
        std::vector<int> path{start};
        mark(start, slot);
        int prev = start;
        int cur = g.neighbors[start][slot];
        while (!is_delimiter(cur)) {
            path.push_back(cur);
            int next = -1, next_slot = -1;
            for (int k = 0; k < 8; ++k) {
                const int nb = g.neighbors[cur][k];
                if (nb >= 0 && nb != prev) {
                    next = nb;
                    next_slot = k;
                    break;
                }
            }
            mark(cur, next_slot);
            prev = cur;
            cur = next;
        }
        path.push_back(cur);
        return path;
    }
};

SegmentKind classify(const SkeletonGraph& g, int first, int last) {
    const bool a = g.degree[first] > 2;
    const bool b = g.degree[last] > 2;
    if (a && b) return SegmentKind::internal;
    if (!a && !b) return SegmentKind::isolated;
    return SegmentKind::extremity;
}

Ucss to_segment(const SkeletonGraph& g, const std::vector<int>& path, SegmentKind kind) {
    Ucss s;
    s.kind = kind;
    s.points.reserve(path.size());
    for (int v : path) {
        s.points.push_back({static_cast<double>(g.vertices[v].x), static_cast<double>(g.vertices[v].y)});
    }
    return s;
}

}  // namespace

ExtractionResult extract_segments(const SkeletonGraph& graph) {
    ExtractionResult out;
    const std::size_t n = graph.size();
    if (n == 0) return out;

    Walker walker(graph);

    // Vertices are already in raster order, so iterating indices ascending visits
    // delimiters in canonical (y, x) order; neighbor slots give the clockwise
    // tie-break at each delimiter.
    for (std::size_t v = 0; v < n; ++v) {
        if (graph.degree[v] == 0) {
            ++out.isolated_dropped;
            continue;
        }
        if (!walker.is_delimiter(static_cast<int>(v))) continue;
        for (int k = 0; k < 8; ++k) {
            if (graph.neighbors[v][k] < 0 || walker.used[v][k]) continue;
            const std::vector<int> path = walker.run(static_cast<int>(v), k);
            out.segments.push_back(to_segment(graph, path, classify(graph, path.front(), path.back())));
        }
    }

    // Whatever is left untraversed belongs to components where every vertex has
    // degree 2: pure cycles.
    std::vector<bool> in_cycle_done(n, false);
    for (std::size_t v = 0; v < n; ++v) {
        if (graph.degree[v] != 2 || in_cycle_done[v]) continue;
        bool touched = false;
        for (int k = 0; k < 8; ++k) {
            if (walker.used[v][k]) {
                touched = true;
                break;
            }
        }
        if (touched) continue;

        // v is the smallest (y, x) vertex of its cycle so far encountered; since we
        // scan in raster order it is the canonical start. Head toward the smaller
        // (y, x) neighbor.
        int first = -1, second = -1;
        for (int k = 0; k < 8; ++k) {
            const int nb = graph.neighbors[v][k];
            if (nb < 0) continue;
            if (first < 0) {
                first = nb;
            } else {
                second = nb;
            }
        }
        const int toward =
            (graph.vertices[first] < graph.vertices[second]) ? first : second;

        std::vector<int> path{static_cast<int>(v)};
        in_cycle_done[v] = true;
        int prev = static_cast<int>(v);
        int cur = toward;
        while (cur != static_cast<int>(v)) {
            path.push_back(cur);
            in_cycle_done[cur] = true;
            int next = -1;
            for (int k = 0; k < 8; ++k) {
                const int nb = graph.neighbors[cur][k];
                if (nb >= 0 && nb != prev) {
                    next = nb;
                    break;
                }
            }
            prev = cur;
            cur = next;
        }
        out.segments.push_back(to_segment(graph, path, SegmentKind::cycle));
    }
    return out;
}

}  // namespace sigver
