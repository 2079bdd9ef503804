#pragma once

namespace cantor {

// Enumeration depth budget: operations whose cost scales as 2^n (partitions,
// brute-force distances, residual sweeps, transfer grids) refuse to run past
// this depth. Defaults to 24; the CANTOR_BAYES_DEPTH_BUDGET environment
// variable overrides it, and set_depth_budget overrides both.
int depth_budget();
void set_depth_budget(int depth);

// Throws DepthBudgetError when depth exceeds the budget. `what` names the
// operation for the error message.
void require_enumerable(long depth, const char* what);

// Hard cap for single-word operations (evaluation walks, sampling): these do
// not enumerate, so they are bounded by word length rather than the budget.
inline constexpr long kMaxWordLength = 1L << 20;
void require_word_length(long length, const char* what);

}  // namespace cantor
