//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SMISELF_CORRECTOR_LOOP_H_
#define SMISELF_CORRECTOR_LOOP_H_

#include <chrono>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "smiself/selfies.h"
#include "smiself/smiles_reader.h"

namespace smiself {

struct Feedback {
  bool valid = false;
  ErrorClass error_class = ErrorClass::kSyntaxError;
  std::string message;
};

Feedback verify(std::string_view candidate,
                const ValenceTable &table = ValenceTable::standard());

inline constexpr std::string_view kInvalidSmilesMask =
    "[INVALID_SMILES_REPRESENTATION_MASK]";
inline constexpr std::string_view kCaptionMask = "[CAPTION_MASK]";

/// Replaces every occurrence of the two masks.
std::string render_prompt(std::string_view prompt_template,
                          std::string_view description,
                          std::string_view candidate);

struct CorrectionRequest {
  std::string description;
  std::string initial_candidate;
  std::string prompt_template;
  int max_iterations = 1;  // must be >= 1
};

struct ProposalContext {
  std::string_view description;
  std::string_view current_candidate;
  int attempt_index;  // 0-based
  const Feedback &feedback;  // verdict on current_candidate
  std::string_view prompt;   // template with both masks filled
};

/// Throwing from propose() counts as a failed attempt.
class CorrectorBackend {
public:
  virtual ~CorrectorBackend() = default;
  virtual std::string propose(const ProposalContext &context) = 0;
};

struct Attempt {
  std::string candidate;
  Feedback feedback;
  bool backend_failed = false;
};

struct LoopResult {
  std::string initial_candidate;
  std::string final_candidate;
  int iterations_used = 0;
  bool succeeded = false;
  std::vector<Attempt> history;
};

/// Throws std::invalid_argument when max_iterations < 1.
LoopResult run_loop(const CorrectionRequest &request, CorrectorBackend &backend,
                    const ValenceTable &table = ValenceTable::standard());

class SmiSelfBackend : public CorrectorBackend {
public:
  explicit SmiSelfBackend(const Alphabet &alphabet = Alphabet::standard())
      : alphabet_(alphabet) {}
  std::string propose(const ProposalContext &context) override;

private:
  const Alphabet &alphabet_;
};

/// Treats the candidate as SELFIES-ish text: drops everything outside the
/// alphabet, decodes, and writes canonical SMILES.
class SelfiesEditBackend : public CorrectorBackend {
public:
  explicit SelfiesEditBackend(const Alphabet &alphabet = Alphabet::standard())
      : alphabet_(alphabet) {}
  std::string propose(const ProposalContext &context) override;

private:
  const Alphabet &alphabet_;
};

struct ExternalProcessOptions {
  std::vector<std::string> argv;  // argv[0] is looked up on PATH
  std::chrono::milliseconds timeout { 60000 };
  bool concurrent_safe = false;
};

/// Child process speaking one JSON object per line in each direction. By
/// default one long-lived child serves all calls under a lock; with
/// concurrent_safe every call gets its own short-lived child. A crash,
/// timeout, EOF or malformed reply throws from propose(), and the next call
/// starts a fresh child.
class ExternalProcessBackend : public CorrectorBackend {
public:
  explicit ExternalProcessBackend(ExternalProcessOptions options);
  ~ExternalProcessBackend() override;

  ExternalProcessBackend(const ExternalProcessBackend &) = delete;
  ExternalProcessBackend &operator=(const ExternalProcessBackend &) = delete;

  std::string propose(const ProposalContext &context) override;

private:
  struct Child;

  std::unique_ptr<Child> spawn() const;
  std::string exchange(std::unique_ptr<Child> &child, const std::string &line);
  static void stop(std::unique_ptr<Child> &child);

  ExternalProcessOptions options_;
  std::unique_ptr<Child> child_;
  std::mutex mutex_;
};

}  // namespace smiself

#endif  // SMISELF_CORRECTOR_LOOP_H_
