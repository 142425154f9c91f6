#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "metacomb/errors.hpp"

namespace metacomb {

// Dense n_samples x n_classes matrix of 0/1 indicators, row-major.
// Used both for gold labels and for thresholded predictions (label sets).
struct LabelMatrix {
    std::vector<std::string> class_names;
    std::size_t n_samples{0};
    std::vector<std::uint8_t> values;

    LabelMatrix() = default;
    LabelMatrix(std::vector<std::string> classes, std::size_t n)
        : class_names(std::move(classes)), n_samples(n),
          values(n * class_names.size(), 0) {}

    std::size_t n_classes() const { return class_names.size(); }

    std::uint8_t at(std::size_t sample, std::size_t cls) const {
        return values[sample * class_names.size() + cls];
    }
    void set(std::size_t sample, std::size_t cls, bool v) {
        values[sample * class_names.size() + cls] = v ? 1 : 0;
    }

    std::span<const std::uint8_t> row(std::size_t sample) const {
        return {values.data() + sample * class_names.size(), class_names.size()};
    }

    std::vector<std::uint8_t> column(std::size_t cls) const {
        std::vector<std::uint8_t> col(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) col[i] = at(i, cls);
        return col;
    }

    std::size_t class_index(const std::string& name) const {
        for (std::size_t c = 0; c < class_names.size(); ++c) {
            if (class_names[c] == name) return c;
        }
        throw DataError("unknown class '" + name + "'");
    }

    bool operator==(const LabelMatrix&) const = default;
};

} // namespace metacomb
