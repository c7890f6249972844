#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fmpd {

// Pipeline progress of the 2^n work buffer. Transitions only move forward:
// products -> terms -> partial_sums.
enum class Stage { products, terms, partial_sums };

const char* stage_name(Stage s);

struct LatticeBuffer {
    int n = 0;
    Stage stage = Stage::products;
    std::vector<double> data;

    std::size_t size() const { return data.size(); }
    double operator[](std::size_t i) const { return data[i]; }
    double& operator[](std::size_t i) { return data[i]; }

    void require_stage(Stage expected) const {
        if (stage != expected)
            throw std::invalid_argument(std::string("buffer is at stage '") + stage_name(stage) +
                                        "', expected '" + stage_name(expected) + "'");
    }
};

inline const char* stage_name(Stage s) {
    switch (s) {
        case Stage::products: return "products";
        case Stage::terms: return "terms";
        case Stage::partial_sums: return "partial_sums";
    }
    return "?";
}

} // namespace fmpd
