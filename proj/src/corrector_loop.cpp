//
// Project smiself - Copyright 2026 The smiself Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "smiself/corrector_loop.h"

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

#include <json.hpp>

#include "smiself/correction.h"
#include "smiself/smiles_writer.h"

namespace smiself {

Feedback verify(std::string_view candidate, const ValenceTable &table) {
  StrictParseResult r = parse_strict(candidate, table);
  if (r)
    return { true, ErrorClass::kValid, "" };
  return { false, r.error->error_class, r.error->message };
}

std::string render_prompt(std::string_view prompt_template,
                          std::string_view description,
                          std::string_view candidate) {
  std::string out;
  std::size_t i = 0;
  while (i < prompt_template.size()) {
    std::string_view rest = prompt_template.substr(i);
    if (rest.starts_with(kInvalidSmilesMask)) {
      out += candidate;
      i += kInvalidSmilesMask.size();
    } else if (rest.starts_with(kCaptionMask)) {
      out += description;
      i += kCaptionMask.size();
    } else {
      out += prompt_template[i++];
    }
  }
  return out;
}

LoopResult run_loop(const CorrectionRequest &request, CorrectorBackend &backend,
                    const ValenceTable &table) {
  if (request.max_iterations < 1)
    throw std::invalid_argument("max_iterations must be at least 1");

  LoopResult result;
  result.initial_candidate = request.initial_candidate;
  result.final_candidate = request.initial_candidate;

  std::string current = request.initial_candidate;
  Feedback feedback = verify(current, table);

  for (int i = 0; i < request.max_iterations; ++i) {
    std::string prompt =
        render_prompt(request.prompt_template, request.description, current);
    ProposalContext ctx { request.description, current, i, feedback, prompt };

    Attempt attempt;
    try {
      attempt.candidate = backend.propose(ctx);
      attempt.feedback = verify(attempt.candidate, table);
    } catch (const std::exception &e) {
      attempt.backend_failed = true;
      attempt.candidate = current;
      attempt.feedback = { false, ErrorClass::kSyntaxError,
                           std::string("backend failure: ") + e.what() };
    }

    result.history.push_back(attempt);
    result.iterations_used = i + 1;
    result.final_candidate = attempt.candidate;
    if (attempt.feedback.valid) {
      result.succeeded = true;
      return result;
    }
    // A failed call leaves the candidate, and so its verdict, unchanged.
    if (!attempt.backend_failed) {
      current = attempt.candidate;
      feedback = attempt.feedback;
    }
  }
  return result;
}

std::string SmiSelfBackend::propose(const ProposalContext &context) {
  return smiself_correct(context.current_candidate, alphabet_).output;
}

std::string SelfiesEditBackend::propose(const ProposalContext &context) {
  DecodeResult decoded = decode(context.current_candidate, alphabet_);
  if (decoded.graph.empty())
    return "";
  return canonical_smiles(decoded.graph);
}

// External process

struct ExternalProcessBackend::Child {
  pid_t pid = -1;
  int fd = -1;
  std::string buffer;
};

namespace {

using Clock = std::chrono::steady_clock;

void send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR)
        continue;
      throw std::runtime_error(std::string("write to corrector failed: ")
                               + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

ExternalProcessBackend::ExternalProcessBackend(ExternalProcessOptions options)
    : options_(std::move(options)) {
  if (options_.argv.empty())
    throw std::invalid_argument("external corrector needs a command");
}

ExternalProcessBackend::~ExternalProcessBackend() { stop(child_); }

std::unique_ptr<ExternalProcessBackend::Child> ExternalProcessBackend::spawn()
    const {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0)
    throw std::runtime_error("socketpair failed");

  std::vector<std::string> args = options_.argv;
  std::vector<char *> argv;
  for (auto &a: args)
    argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw std::runtime_error("fork failed");
  }
  if (pid == 0) {
    ::dup2(fds[1], STDIN_FILENO);
    ::dup2(fds[1], STDOUT_FILENO);
    ::execvp(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(fds[1]);
  auto child = std::make_unique<Child>();
  child->pid = pid;
  child->fd = fds[0];
  return child;
}

void ExternalProcessBackend::stop(std::unique_ptr<Child> &child) {
  if (!child)
    return;
  if (child->fd >= 0)
    ::close(child->fd);
  if (child->pid > 0) {
    ::kill(child->pid, SIGTERM);
    ::waitpid(child->pid, nullptr, 0);
  }
  child.reset();
}

std::string ExternalProcessBackend::exchange(std::unique_ptr<Child> &child,
                                             const std::string &line) {
  if (!child)
    child = spawn();

  auto deadline = Clock::now() + options_.timeout;
  try {
    send_all(child->fd, line);
    for (;;) {
      if (auto nl = child->buffer.find('\n'); nl != std::string::npos) {
        std::string reply = child->buffer.substr(0, nl);
        child->buffer.erase(0, nl + 1);
        return reply;
      }
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - Clock::now());
      if (left.count() <= 0)
        throw std::runtime_error("corrector timed out");
      pollfd p { child->fd, POLLIN, 0 };
      int ready = ::poll(&p, 1, static_cast<int>(left.count()));
      if (ready < 0 && errno == EINTR)
        continue;
      if (ready <= 0)
        throw std::runtime_error("corrector timed out");
      char chunk[4096];
      ssize_t n = ::read(child->fd, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR)
        continue;
      if (n <= 0)
        throw std::runtime_error("corrector closed its output");
      child->buffer.append(chunk, static_cast<std::size_t>(n));
    }
  } catch (...) {
    stop(child);
    throw;
  }
}

std::string ExternalProcessBackend::propose(const ProposalContext &context) {
  nlohmann::json request = {
    { "description", context.description },
    { "invalid_smiles", context.current_candidate },
    { "attempt", context.attempt_index },
    { "error_class", to_string(context.feedback.error_class) },
    { "message", context.feedback.message },
  };
  std::string line =
      request.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
      + "\n";

  std::string reply;
  if (options_.concurrent_safe) {
    // One short-lived child per call; nothing shared.
    std::unique_ptr<Child> own;
    reply = exchange(own, line);
    stop(own);
  } else {
    std::lock_guard<std::mutex> lock(mutex_);
    reply = exchange(child_, line);
  }

  nlohmann::json response = nlohmann::json::parse(reply, nullptr, false);
  if (response.is_discarded() || !response.is_object()
      || !response.contains("smiles") || !response["smiles"].is_string())
    throw std::runtime_error("corrector reply is not {\"smiles\": string}");
  return response["smiles"].get<std::string>();
}

}  // namespace smiself
