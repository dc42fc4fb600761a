#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fuzzy_spectra/analysis.hpp"
#include "fuzzy_spectra/core.hpp"

namespace fuzzy {

/// Scope of a verification run. Checks that need dense matrices cap the
/// range on their own (see theorem_ids()).
struct SuiteOptions {
  int lambda_min = 1;
  int lambda_max = 200;
  std::optional<SpaceKind> space;  // restricts parity/simplicity to one space
  std::optional<int> m;            // restricts sphere blocks to one m
  std::optional<KRule> k_rule;     // overrides each check's own rule
};

/// Every id accepted by run_theorem, in the order run_all emits them.
///
///   closed-form, toeplitz-oracle, parity, simplicity, monotonicity-circle,
///   monotonicity-circle-proof, bounds-circle, monotonicity-sphere,
///   bounds-sphere, perturbation-circle, perturbation-sphere, density,
///   interlacing (lambda <= 60), norm-chain (lambda <= 60),
///   coefficient-inequality, algebra-circle (lambda <= 12),
///   algebra-sphere (lambda <= 8), block-union (lambda <= 8), localization,
///   madore.
const std::vector<std::string>& theorem_ids();

/// Throws std::invalid_argument for an unknown id.
VerificationReport run_theorem(const std::string& id, const SuiteOptions& options);

std::vector<VerificationReport> run_all(const SuiteOptions& options);

}  // namespace fuzzy
