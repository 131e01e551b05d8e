#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "pdadvisor/errors.hpp"

namespace pda {

// Dense 0/1 matrix with labelled axes, stored row-major.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(std::vector<std::string> rows, std::vector<std::string> cols)
      : rows_(std::move(rows)), cols_(std::move(cols)), bits_(rows_.size() * cols_.size(), 0) {}

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_.size(); }
  const std::vector<std::string>& row_labels() const { return rows_; }
  const std::vector<std::string>& column_labels() const { return cols_; }

  bool at(std::size_t r, std::size_t c) const { return bits_[r * cols_.size() + c] != 0; }
  void set(std::size_t r, std::size_t c, bool v = true) { bits_[r * cols_.size() + c] = v ? 1 : 0; }

  std::vector<bool> row(std::size_t r) const {
    std::vector<bool> out(cols_.size());
    for (std::size_t c = 0; c < cols_.size(); ++c) out[c] = at(r, c);
    return out;
  }

  std::size_t row_weight(std::size_t r) const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < cols_.size(); ++c) n += at(r, c);
    return n;
  }

  std::size_t column_index(const std::string& label) const {
    for (std::size_t c = 0; c < cols_.size(); ++c) {
      if (cols_[c] == label) return c;
    }
    throw Error("no column '" + label + "'");
  }

  std::size_t row_index(const std::string& label) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (rows_[r] == label) return r;
    }
    throw Error("no row '" + label + "'");
  }

  // Header row of column labels with an empty corner cell; LF line endings.
  std::string to_csv() const {
    std::ostringstream out;
    for (const auto& c : cols_) out << ',' << c;
    out << '\n';
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      out << rows_[r];
      for (std::size_t c = 0; c < cols_.size(); ++c) out << ',' << (at(r, c) ? '1' : '0');
      out << '\n';
    }
    return out.str();
  }

  bool operator==(const BinaryMatrix&) const = default;

 private:
  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace pda
