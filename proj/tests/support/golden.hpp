#pragma once

// Frozen values for the bundled bloggers corpus, produced by
// tests/oracle/split_oracle.py (exact rational tallies of the data rows).

#include <array>
#include <string_view>

namespace tendmine::golden {

struct SplitGolden {
    std::string_view attribute;
    double info_gain;
    double split_info;
    double gain_ratio;
};

inline constexpr double kClassEntropy = 0.90438145772449374;

inline constexpr std::array<SplitGolden, 5> kSplits{{
    {"degree", 0.079735910676220101, 1.4388628750418937, 0.055415920487835592},
    {"caprice", 0.07713118598211377, 1.4168604812281771, 0.054438095355199792},
    {"topic", 0.081202840579233215, 2.1585614722313178, 0.037618961342478406},
    {"lmt", 0.0061105137176893365, 0.58423881164285596, 0.010458931512110293},
    {"lpss", 0.0015346980066046623, 0.85545081056013061, 0.0017940225056304235},
}};

}  // namespace tendmine::golden
