//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "smiself/correction.h"
#include "smiself/metrics.h"
#include "smiself/selfies.h"
#include "smiself/smiles_reader.h"
#include "smiself/smiles_writer.h"

namespace smiself::cli {
namespace {

using nlohmann::json;

struct Options {
  std::string input;
  std::string output;
  std::string format = "tsv";
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string valence_table;
  std::string patterns;
  bool verbose = false;

  std::string references;
  std::string original;
  int radius = Fingerprint::kDefaultRadius;
  std::size_t width = Fingerprint::kDefaultWidth;
  std::string summary;
  std::string kinds;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One output line; `sentinel` marks records that drive exit code 1.
struct Record {
  std::string text;
  bool sentinel = false;
};

std::string dump(const json &j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

json nullable(const std::optional<double> &v) {
  return v ? json(*v) : json(nullptr);
}

// Tabs, newlines and backslashes would break the column layout.
std::string tsv_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c: s) {
    switch (c) {
    case '\t':
      out += "\\t";
      break;
    case '\n':
      out += "\\n";
      break;
    case '\r':
      out += "\\r";
      break;
    case '\\':
      out += "\\\\";
      break;
    default:
      out += c;
    }
  }
  return out;
}

std::vector<std::string> read_lines(std::istream &in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw UsageError("cannot read " + path);
  return read_lines(in);
}

template <typename Fn>
std::vector<Record> parallel_map(const std::vector<std::string> &lines,
                                 int jobs, Fn fn) {
  std::vector<Record> out(lines.size());
  std::atomic<std::size_t> next { 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= lines.size())
        return;
      try {
        out[i] = fn(i, lines[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next = lines.size();
        return;
      }
    }
  };

  std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                        std::max<std::size_t>(lines.size(), 1));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n; ++t)
      threads.emplace_back(worker);
    for (auto &t: threads)
      t.join();
  }
  if (failure)
    std::rethrow_exception(failure);
  return out;
}

int write_records(const std::vector<Record> &records, std::ostream &out) {
  bool sentinel = false;
  for (const auto &r: records) {
    out << r.text << '\n';
    sentinel = sentinel || r.sentinel;
  }
  out.flush();
  return sentinel ? kExitSentinel : kExitOk;
}

std::vector<std::string> error_classes(const std::vector<Diagnostic> &diags) {
  std::vector<std::string> out;
  for (const auto &d: diags) {
    std::string name(to_string(d.error_class));
    if (std::find(out.begin(), out.end(), name) == out.end())
      out.push_back(name);
  }
  return out;
}

// Commands

class Runner {
public:
  Runner(const Options &opt, std::istream &in, std::ostream &out,
         std::ostream &err)
      : opt_(opt), in_(in), out_(out), err_(err),
        table_(opt.valence_table.empty()
                   ? ValenceTable::standard()
                   : ValenceTable::from_file(opt.valence_table)),
        alphabet_(table_) {
    if (opt_.format != "tsv" && opt_.format != "jsonl")
      throw UsageError("--format must be tsv or jsonl");
    if (opt_.jobs < 1)
      throw UsageError("--jobs must be at least 1");
  }

  std::vector<std::string> input() {
    return opt_.input.empty() ? read_lines(in_) : read_file(opt_.input);
  }

  int emit(const std::vector<Record> &records) {
    if (opt_.output.empty())
      return write_records(records, out_);
    std::ofstream file(opt_.output, std::ios::binary);
    if (!file)
      throw UsageError("cannot write " + opt_.output);
    int code = write_records(records, file);
    if (!file)
      throw UsageError("cannot write " + opt_.output);
    return code;
  }

  void emit_json(const json &j) {
    Record r { dump(j) };
    emit({ r });
  }

  bool jsonl() const { return opt_.format == "jsonl"; }

  int correct() {
    auto lines = input();
    auto records = parallel_map(lines, opt_.jobs, [&](std::size_t,
                                                      const std::string &line) {
      CorrectionReport rep = smiself_correct(line, alphabet_);
      auto classes = error_classes(rep.diagnostics);
      Record r;
      r.sentinel = rep.is_sentinel();
      if (jsonl()) {
        json j = {
          { "input", rep.input },
          { "output", rep.output },
          { "was_already_valid", rep.was_already_valid },
          { "changed", rep.changed },
          { "error_classes", classes },
        };
        if (opt_.verbose) {
          j["intermediate_selfies"] = rep.intermediate_selfies;
          j["notes"] = rep.notes;
        }
        r.text = dump(j);
      } else {
        std::string flags = rep.was_already_valid ? "valid" : "corrected";
        if (rep.is_sentinel())
          flags = "sentinel";
        if (rep.changed)
          flags += ",changed";
        std::string joined;
        for (const auto &c: classes)
          joined += (joined.empty() ? "" : ";") + c;
        r.text = tsv_escape(rep.input) + '\t' + rep.output + '\t' + flags
                 + '\t' + joined;
        if (opt_.verbose)
          r.text += '\t' + rep.intermediate_selfies;
      }
      return r;
    });
    return emit(records);
  }

  int classify() {
    auto lines = input();
    std::vector<ErrorClass> classes(lines.size());
    auto records = parallel_map(lines, opt_.jobs, [&](std::size_t i,
                                                      const std::string &line) {
      classes[i] = classify_error(line, table_);
      std::string name(to_string(classes[i]));
      if (jsonl())
        return Record { dump({ { "input", line }, { "error_class", name } }) };
      return Record { tsv_escape(line) + '\t' + name };
    });

    std::map<ErrorClass, std::size_t> counts;
    for (auto c: classes)
      ++counts[c];
    json histogram = json::object();
    for (ErrorClass c: kAllErrorClasses) {
      std::size_t n = counts[c];
      histogram[std::string(to_string(c))] = {
        { "count", n },
        { "fraction", lines.empty() ? json(nullptr)
                                    : json(static_cast<double>(n)
                                           / static_cast<double>(lines.size())) },
      };
    }
    json summary = { { "total", lines.size() }, { "histogram", histogram } };

    int code = emit(records);
    if (opt_.summary.empty()) {
      err_ << dump(summary) << '\n';
    } else {
      std::ofstream file(opt_.summary);
      if (!(file << dump(summary) << '\n'))
        throw UsageError("cannot write " + opt_.summary);
    }
    return code;
  }

  int metrics() {
    auto predictions = input();
    std::vector<std::string> references, originals;
    EvaluationInputs ev;
    ev.predictions = predictions;
    ev.radius = opt_.radius;
    ev.width = opt_.width;
    if (!opt_.references.empty()) {
      references = read_file(opt_.references);
      ev.references = references;
    }
    if (!opt_.original.empty()) {
      originals = read_file(opt_.original);
      ev.originals = originals;
    }
    std::vector<PatternSet> patterns = opt_.patterns.empty()
                                           ? builtin_patterns()
                                           : load_patterns(opt_.patterns);

    MetricsReport rep;
    try {
      rep = evaluate(ev, table_);
    } catch (const std::invalid_argument &e) {
      throw UsageError(e.what());
    }

    json membership = json::object();
    std::vector<MolecularGraph> valid;
    for (const auto &p: predictions) {
      if (auto r = parse_strict(p, table_))
        valid.push_back(std::move(*r.graph));
    }
    for (const auto &set: patterns) {
      if (valid.empty()) {
        membership[set.name] = nullptr;
        continue;
      }
      std::size_t hits = 0;
      for (const auto &g: valid)
        hits += set.matches(g, table_) ? 1 : 0;
      membership[set.name] =
          static_cast<double>(hits) / static_cast<double>(valid.size());
    }

    json j = {
      { "predictions", rep.predictions },
      { "valid_predictions", rep.valid_predictions },
      { "validity", nullable(rep.validity) },
      { "exact_match", nullable(rep.exact_match) },
      { "mean_levenshtein", nullable(rep.mean_levenshtein) },
      { "mean_tanimoto", nullable(rep.mean_tanimoto) },
      { "diversity", nullable(rep.diversity) },
      { "membership", membership },
      { "invalid_before", ev.originals ? json(rep.invalid_before) : json(nullptr) },
      { "valid_after", ev.originals ? json(rep.valid_after) : json(nullptr) },
      { "correction_rate", nullable(rep.correction_rate) },
    };
    emit_json(j);
    return kExitOk;
  }

  int selfies(const std::string &mode) {
    auto lines = input();
    auto records = parallel_map(lines, opt_.jobs, [&](std::size_t,
                                                      const std::string &line) {
      Record r;
      std::string result;
      if (mode == "encode") {
        StrictParseResult parsed = parse_strict(line, table_);
        if (parsed)
          result = to_string(encode(*parsed.graph, alphabet_));
        r.sentinel = !parsed;
      } else if (mode == "decode") {
        DecodeResult d = decode(std::string_view(line), alphabet_);
        if (!d.graph.empty())
          result = canonical_smiles(d.graph);
        r.sentinel = d.graph.empty();
      } else {
        result = to_string(edit_invalid(line, alphabet_));
      }
      r.text = jsonl() ? dump({ { "input", line }, { "output", result } })
                       : result;
      return r;
    });
    return emit(records);
  }

  int mutate() {
    std::vector<MutationKind> kinds;
    std::stringstream ss(opt_.kinds);
    for (std::string name; std::getline(ss, name, ',');) {
      if (name.empty())
        continue;
      auto k = mutation_kind_from_string(name);
      if (!k)
        throw UsageError("unknown mutation kind: " + name);
      kinds.push_back(*k);
    }
    auto lines = input();
    auto records = parallel_map(lines, opt_.jobs, [&](std::size_t i,
                                                      const std::string &line) {
      std::string result = line.empty()
                               ? line
                               : mutate_smiles(line, line_seed(i), kinds);
      return Record { jsonl() ? dump({ { "input", line }, { "output", result } })
                              : result };
    });
    return emit(records);
  }

private:
  // splitmix64 over (seed, line index): independent of --jobs.
  std::uint64_t line_seed(std::size_t index) const {
    std::uint64_t z = opt_.seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  const Options &opt_;
  std::istream &in_;
  std::ostream &out_;
  std::ostream &err_;
  ValenceTable table_;
  Alphabet alphabet_;
};

}  // namespace

int run_cli(const std::vector<std::string> &args, std::istream &in,
            std::ostream &out, std::ostream &err) {
  Options opt;
  CLI::App app { "Correct invalid SMILES by a round trip through SELFIES.",
                 "smiself" };
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--input,-i", opt.input, "Input file (default: stdin)");
  app.add_option("--output,-o", opt.output, "Output file (default: stdout)");
  app.add_option("--format", opt.format, "tsv or jsonl")
      ->check(CLI::IsMember({ "tsv", "jsonl" }));
  app.add_option("--jobs,-j", opt.jobs, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "Seed for mutate");
  app.add_option("--valence-table", opt.valence_table,
                 "Element<TAB>valences file replacing the built-in table");
  app.add_option("--patterns", opt.patterns,
                 "name<TAB>smiles membership patterns");
  app.add_flag("--verbose,-v", opt.verbose,
               "Add intermediate SELFIES and notes to correct output");

  auto *correct = app.add_subcommand("correct", "Correct one SMILES per line");
  auto *classify =
      app.add_subcommand("classify", "Classify the first error of each line");
  classify->add_option("--summary", opt.summary,
                       "Write the histogram JSON here instead of stderr");
  auto *metrics = app.add_subcommand("metrics", "Score predictions");
  metrics->add_option("--references", opt.references, "Reference SMILES file");
  metrics->add_option("--original", opt.original,
                      "Pre-correction strings, for correction_rate");
  metrics->add_option("--radius", opt.radius, "Fingerprint radius")
      ->check(CLI::NonNegativeNumber);
  metrics->add_option("--width", opt.width, "Fingerprint width (power of two)");
  auto *selfies = app.add_subcommand("selfies", "SELFIES utilities");
  selfies->require_subcommand(1);
  selfies->fallthrough();
  auto *encode_cmd = selfies->add_subcommand("encode", "SMILES to SELFIES");
  auto *decode_cmd = selfies->add_subcommand("decode", "SELFIES to SMILES");
  auto *edit_cmd = selfies->add_subcommand("edit", "Drop non-alphabet symbols");
  auto *mutate = app.add_subcommand("mutate", "Corrupt a valid corpus");
  mutate->add_option("--kinds", opt.kinds,
                     "Comma-separated mutation kinds (default: all)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Runner runner(opt, in, out, err);
    if (*correct)
      return runner.correct();
    if (*classify)
      return runner.classify();
    if (*metrics)
      return runner.metrics();
    if (*selfies) {
      if (*encode_cmd)
        return runner.selfies("encode");
      if (*decode_cmd)
        return runner.selfies("decode");
      if (*edit_cmd)
        return runner.selfies("edit");
    }
    if (*mutate)
      return runner.mutate();
  } catch (const std::exception &e) {
    err << "smiself: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace smiself::cli
