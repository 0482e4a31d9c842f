#pragma once

/// \file solver.hpp
/// Solver backends. Both return the same SolveResult:
///  - InProcessSolver runs the bundled CDCL solver,
///  - ExternalSolver writes a DIMACS file and runs a competition-style
///    binary (CaDiCaL, Kissat, Glucose with -model, ...), reading its
///    "s"/"v" lines. Exit status is ignored.
///
/// A backend object only holds configuration; every solve() call builds
/// fresh solver state, so calls on distinct formulas may run concurrently.

#include <gsynth/cdcl.hpp>
#include <gsynth/cnf.hpp>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

namespace gsynth {

struct SolveLimits {
  std::optional<std::chrono::milliseconds> wall_time;
  /// Address-space limit for external solvers, in MiB. Ignored in-process.
  std::optional<std::size_t> memory_mb;
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual SolveResult solve(const CnfFormula& formula, const SolveLimits& limits) const = 0;
  virtual std::string name() const = 0;
};

class InProcessSolver final : public SolverBackend {
 public:
  SolveResult solve(const CnfFormula& formula, const SolveLimits& limits) const override {
    const auto start = std::chrono::steady_clock::now();
    CdclLimits cl;
    if (limits.wall_time) {
      cl.deadline = start + *limits.wall_time;
    }
    CdclSolver solver(formula);
    SolveResult result;
    result.status = solver.solve(cl);
    if (result.status == SolveStatus::sat) {
      result.model = solver.model();
    } else if (result.status == SolveStatus::unknown) {
      result.diagnostic = "time limit reached";
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

  std::string name() const override { return "cdcl (in-process)"; }
};

class ExternalSolver final : public SolverBackend {
 public:
  /// With no explicit arguments, "-q" is passed to cadical/kissat and
  /// "-model" to glucose.
  explicit ExternalSolver(std::string path, std::optional<std::vector<std::string>> args = {})
      : path_(std::move(path)) {
    if (args) {
      args_ = std::move(*args);
    } else {
      const auto base = std::filesystem::path(path_).filename().string();
      if (base.find("glucose") != std::string::npos) {
        args_ = {"-model"};
      } else if (base.find("cadical") != std::string::npos ||
                 base.find("kissat") != std::string::npos) {
        args_ = {"-q"};
      }
    }
  }

  const std::string& path() const noexcept { return path_; }
  const std::vector<std::string>& args() const noexcept { return args_; }

  std::string name() const override { return path_; }

  SolveResult solve(const CnfFormula& formula, const SolveLimits& limits) const override {
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;

    auto tmpl = (std::filesystem::temp_directory_path() / "gsynth-XXXXXX.cnf").string();
    const int fd = ::mkstemps(tmpl.data(), 4);
    if (fd < 0) {
      result.diagnostic = "cannot create temporary DIMACS file";
      return result;
    }
    ::close(fd);
    struct Cleanup {
      std::string path;
      ~Cleanup() { std::remove(path.c_str()); }
    } cleanup{tmpl};
    {
      std::ofstream out(tmpl, std::ios::binary);
      out << write_dimacs(formula);
      if (!out) {
        result.diagnostic = "cannot write temporary DIMACS file";
        return result;
      }
    }

    std::string output;
    const auto run = run_process(tmpl, limits, output);
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!run.empty()) {
      result.diagnostic = run;
      return result;
    }
    auto parsed = parse_model(output, formula.num_vars());
    parsed.seconds = result.seconds;
    return parsed;
  }

 private:
  /// Returns an empty string on normal termination, else a diagnostic.
  std::string run_process(const std::string& cnf_path, const SolveLimits& limits,
                          std::string& output) const {
    int pipe_fds[2];
    if (::pipe2(pipe_fds, O_CLOEXEC) != 0) {
      return "pipe2() failed";
    }
    std::vector<std::string> argv_storage{path_};
    argv_storage.insert(argv_storage.end(), args_.begin(), args_.end());
    argv_storage.push_back(cnf_path);
    std::vector<char*> argv;
    for (auto& a : argv_storage) {
      argv.push_back(a.data());
    }
    argv.push_back(nullptr);

    const pid_t pid = ::fork();
    if (pid < 0) {
      ::close(pipe_fds[0]);
      ::close(pipe_fds[1]);
      return "fork() failed";
    }
    if (pid == 0) {
      ::dup2(pipe_fds[1], STDOUT_FILENO);
      const int devnull = ::open("/dev/null", O_WRONLY);
      if (devnull >= 0) {
        ::dup2(devnull, STDERR_FILENO);
      }
      ::close(pipe_fds[0]);
      ::close(pipe_fds[1]);
      if (limits.memory_mb) {
        const rlim_t bytes = static_cast<rlim_t>(*limits.memory_mb) * 1024 * 1024;
        rlimit rl{bytes, bytes};
        ::setrlimit(RLIMIT_AS, &rl);
      }
      ::execv(path_.c_str(), argv.data());
      ::_exit(127);
    }
    ::close(pipe_fds[1]);

    const auto deadline =
        limits.wall_time ? std::optional(std::chrono::steady_clock::now() + *limits.wall_time)
                         : std::nullopt;
    bool timed_out = false;
    char buffer[1 << 16];
    for (;;) {
      int timeout_ms = -1;
      if (deadline) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            *deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
          timed_out = true;
          break;
        }
        timeout_ms = static_cast<int>(std::min<long long>(left.count(), 1000));
      }
      pollfd pfd{pipe_fds[0], POLLIN, 0};
      const int ready = ::poll(&pfd, 1, timeout_ms);
      if (ready < 0) {
        if (errno == EINTR) {
          continue;
        }
        break;
      }
      if (ready == 0) {
        continue;
      }
      const auto got = ::read(pipe_fds[0], buffer, sizeof(buffer));
      if (got <= 0) {
        break;
      }
      output.append(buffer, static_cast<std::size_t>(got));
    }
    ::close(pipe_fds[0]);
    if (timed_out) {
      ::kill(pid, SIGKILL);
    }
    int status = 0;
    ::waitpid(pid, &status, 0);
    if (timed_out) {
      return "time limit reached";
    }
    if (WIFEXITED(status) && WEXITSTATUS(status) == 127 && output.empty()) {
      return "cannot execute solver '" + path_ + "'";
    }
    if (WIFSIGNALED(status) && output.find("\ns ") == std::string::npos &&
        output.rfind("s ", 0) != 0) {
      return "solver terminated by signal " + std::to_string(WTERMSIG(status));
    }
    return {};
  }

  std::string path_;
  std::vector<std::string> args_;
};

/// External solver from $GSYNTH_SOLVER when set, in-process otherwise.
inline std::unique_ptr<SolverBackend> default_backend() {
  if (const char* env = std::getenv("GSYNTH_SOLVER"); env != nullptr && *env != '\0') {
    return std::make_unique<ExternalSolver>(env);
  }
  return std::make_unique<InProcessSolver>();
}

}  // namespace gsynth
