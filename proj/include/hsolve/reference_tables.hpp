#pragma once

#include <array>
#include <cstddef>
#include <optional>

namespace hsolve {

/// Benchmark iteration counts the experiment presets are compared against.
/// Tables: 1 direct, 2/3/4 deflated GMRES at 1e-10/1e-5/1e-2, 5 ILU(0) GMRES
/// at 1e-2 (10 ppwl only). avg_inner is 0 for table 1.
struct ReferenceCell {
  int outer = 0;
  int avg_inner = 0;
};

namespace detail {

// [table-1][ppwl 10/20][k 20,40,80,160][N 4,9,16,25]
inline constexpr ReferenceCell kReference[5][2][4][4] = {
    {{{{20, 0}, {27, 0}, {48, 0}, {45, 0}},
      {{31, 0}, {60, 0}, {85, 0}, {101, 0}},
      {{64, 0}, {133, 0}, {191, 0}, {216, 0}},
      {{159, 0}, {262, 0}, {365, 0}, {495, 0}}},
     {{{20, 0}, {40, 0}, {42, 0}, {59, 0}},
      {{37, 0}, {66, 0}, {89, 0}, {115, 0}},
      {{76, 0}, {131, 0}, {189, 0}, {255, 0}},
      {{130, 0}, {289, 0}, {398, 0}, {520, 0}}}},
    {{{{20, 23}, {27, 25}, {56, 24}, {46, 21}},
      {{32, 35}, {62, 29}, {86, 26}, {101, 25}},
      {{65, 45}, {137, 32}, {192, 32}, {221, 29}},
      {{160, 63}, {301, 58}, {373, 36}, {518, 33}}},
     {{{20, 30}, {43, 26}, {42, 25}, {59, 23}},
      {{37, 31}, {66, 32}, {93, 27}, {112, 27}},
      {{75, 36}, {132, 30}, {191, 30}, {268, 27}},
      {{131, 53}, {292, 47}, {407, 31}, {530, 28}}}},
    {{{{20, 12}, {27, 14}, {65, 14}, {46, 12}},
      {{34, 20}, {76, 15}, {95, 14}, {122, 14}},
      {{72, 26}, {154, 17}, {210, 19}, {262, 17}},
      {{175, 44}, {301, 40}, {398, 19}, {572, 20}}},
     {{{20, 15}, {50, 13}, {43, 13}, {59, 12}},
      {{37, 16}, {76, 18}, {104, 14}, {118, 14}},
      {{86, 19}, {148, 16}, {218, 16}, {314, 14}},
      {{144, 34}, {308, 31}, {431, 16}, {555, 15}}}},
    {{{{20, 5}, {27, 6}, {73, 7}, {50, 5}},
      {{42, 8}, {87, 7}, {109, 7}, {126, 6}},
      {{84, 13}, {172, 8}, {241, 10}, {298, 8}},
      {{211, 30}, {332, 22}, {451, 9}, {1007, 8}}},
     {{{21, 7}, {59, 5}, {49, 5}, {72, 5}},
      {{44, 7}, {84, 8}, {124, 6}, {134, 6}},
      {{94, 9}, {154, 7}, {229, 8}, {333, 6}},
      {{154, 20}, {327, 19}, {450, 7}, {584, 6}}}},
    {{{{28, 21}, {42, 12}, {74, 10}, {53, 7}},
      {{44, 64}, {80, 36}, {110, 25}, {131, 17}},
      {{89, 250}, {177, 121}, {239, 83}, {303, 55}},
      {{221, 983}, {344, 502}, {475, 260}, {658, 199}}},
     {}},
};

inline std::optional<std::size_t> index_of(int value, std::array<int, 4> options) {
  for (std::size_t i = 0; i < options.size(); ++i)
    if (options[i] == value) return i;
  return std::nullopt;
}

}  // namespace detail

/// Reference cell for (table, ppwl, k, N), or nullopt when the combination is
/// not part of the benchmark.
inline std::optional<ReferenceCell> reference_cell(int table, int ppwl, int k, int n_subdomains) {
  if (table < 1 || table > 5 || (ppwl != 10 && ppwl != 20)) return std::nullopt;
  if (table == 5 && ppwl != 10) return std::nullopt;
  const auto ki = detail::index_of(k, {20, 40, 80, 160});
  const auto ni = detail::index_of(n_subdomains, {4, 9, 16, 25});
  if (!ki || !ni) return std::nullopt;
  return detail::kReference[table - 1][ppwl == 10 ? 0 : 1][*ki][*ni];
}

}  // namespace hsolve
