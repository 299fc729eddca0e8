#include <algorithm>

#include "slidelab/backend.hpp"

namespace slidelab {

namespace {

bool same_ignoring_status(Element a, Element b) {
    a.status = b.status = Status::final;
    return a == b;
}

class OracleReviewer final : public Reviewer {
public:
    explicit OracleReviewer(PerturbationLog log) : log_(std::move(log)) {}

    std::string name() const override { return "oracle"; }

    SlideDoc review(const SlideDoc& doc) const override {
        SlideDoc out = with_all_final(doc);
        for (const auto& entry : log_.entries) {
            if (entry.kind == PerturbationKind::shape_removal) continue;
            Element* e = out.find(entry.element_id);
            if (!e) continue;
            const bool unresolved = entry.kind == PerturbationKind::shape_duplication ||
                                    !entry.original || !same_ignoring_status(*e, *entry.original);
            if (unresolved) e->status = Status::tentative;
        }
        return out;
    }

private:
    PerturbationLog log_;
};

class OracleContributor final : public Contributor {
public:
    explicit OracleContributor(SlideDoc original) : original_(with_all_final(std::move(original))) {}

    std::string name() const override { return "oracle"; }

    SlideDoc contribute(const SlideDoc& labeled) const override {
        if (!labeled.any_tentative()) return labeled;
        SlideDoc out = labeled;
        out.elements.clear();
        for (const auto& e : labeled.elements) {
            if (!e.tentative()) {
                out.elements.push_back(e);
            } else if (const Element* o = original_.find(e.id)) {
                out.elements.push_back(*o);
            }
        }
        // Re-insert originals that are missing, each right after its
        // predecessor in the original order.
        for (std::size_t i = 0; i < original_.elements.size(); ++i) {
            const auto& o = original_.elements[i];
            if (out.find(o.id)) continue;
            std::size_t at = 0;
            if (i > 0) {
                const auto prev = out.index_of(original_.elements[i - 1].id);
                at = prev < 0 ? std::min(i, out.elements.size()) : static_cast<std::size_t>(prev) + 1;
            }
            out.elements.insert(out.elements.begin() + static_cast<std::ptrdiff_t>(at), o);
        }
        return with_all_final(std::move(out));
    }

private:
    SlideDoc original_;
};

}  // namespace

std::unique_ptr<Reviewer> make_oracle_reviewer(PerturbationLog log) { return std::make_unique<OracleReviewer>(std::move(log)); }

std::unique_ptr<Contributor> make_oracle_contributor(SlideDoc original) {
    return std::make_unique<OracleContributor>(std::move(original));
}

}  // namespace slidelab
