#pragma once

// Brute-force confusion-matrix and diff recounts, written without the
// library's metrics code so the two can be checked against each other.

#include <map>
#include <optional>

#include "slidelab/model.hpp"
#include "slidelab/perturb.hpp"

namespace slidelab::gen {

struct Recount {
    std::map<Category, std::optional<double>> precision;
    std::map<Category, std::optional<double>> recall;
    std::optional<double> overall_precision;
};

inline Recount recount_reviewer(const SlideDoc& labeled, const PerturbationLog& log) {
    struct Cell {
        int tp = 0, fn = 0;
    };
    std::map<Category, Cell> cells;
    int fp = 0, flagged = 0;
    for (const auto& e : labeled.elements) {
        std::optional<Category> cat;
        for (const auto& entry : log.entries)
            if (entry.kind != PerturbationKind::shape_removal && entry.element_id == e.id) cat = category_of(entry.kind);
        const bool f = e.status == Status::tentative;
        flagged += f;
        if (!cat) fp += f;
        else if (f) ++cells[*cat].tp;
        else ++cells[*cat].fn;
    }
    int total_support = 0, total_tp = 0;
    for (const auto& [c, cell] : cells) {
        total_support += cell.tp + cell.fn;
        total_tp += cell.tp;
    }
    Recount r;
    for (auto c : all_categories()) {
        const Cell cell = cells.count(c) ? cells[c] : Cell{};
        const int support = cell.tp + cell.fn;
        r.precision[c] = std::nullopt;
        r.recall[c] = std::nullopt;
        if (support == 0) continue;
        r.recall[c] = static_cast<double>(cell.tp) / support;
        const double share = static_cast<double>(fp) * support / total_support;
        if (cell.tp + share > 0) r.precision[c] = cell.tp / (cell.tp + share);
    }
    if (flagged) r.overall_precision = static_cast<double>(total_tp) / flagged;
    return r;
}

inline std::optional<double> recount_responsiveness(const SlideDoc& in, const SlideDoc& out) {
    int flagged = 0, altered = 0;
    for (const auto& e : in.elements) {
        if (e.status != Status::tentative) continue;
        ++flagged;
        bool same = false;
        for (auto o : out.elements)
            if (o.id == e.id) {
                o.status = e.status;
                same = o == e;
            }
        altered += !same;
    }
    if (!flagged) return std::nullopt;
    return static_cast<double>(altered) / flagged;
}

}  // namespace slidelab::gen
