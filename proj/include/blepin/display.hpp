// Copyright 2026 the blepin authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <string>
#include <string_view>

namespace blepin {

/// Virtual 16x2 character display. Rows are always exactly 16 printable
/// characters, space-padded; longer text is truncated, control bytes are
/// replaced by spaces.
class Display {
public:
    static constexpr std::size_t kRows = 2;
    static constexpr std::size_t kCols = 16;

    Display() { clear(); }

    void clear() {
        rows_[0].assign(kCols, ' ');
        rows_[1].assign(kCols, ' ');
    }

    void clear_row(std::size_t row) { rows_.at(row).assign(kCols, ' '); }

    void set_row(std::size_t row, std::string_view text) {
        std::string& r = rows_.at(row);
        r.assign(kCols, ' ');
        for (std::size_t i = 0; i < kCols && i < text.size(); ++i) {
            const char c = text[i];
            r[i] = (c >= 0x20 && c <= 0x7e) ? c : ' ';
        }
    }

    const std::string& row(std::size_t i) const { return rows_.at(i); }

    /// ASCII-framed rendering for terminals.
    std::string render() const {
        std::string out;
        out += "+----------------+\n";
        out += "|" + rows_[0] + "|\n";
        out += "|" + rows_[1] + "|\n";
        out += "+----------------+";
        return out;
    }

    bool operator==(const Display&) const = default;

private:
    std::array<std::string, kRows> rows_;
};

} // namespace blepin
