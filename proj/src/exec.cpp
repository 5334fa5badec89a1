// Copyright 2026 The ffg Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ffg/exec.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "ffg/errors.hpp"
#include "ffg/parallel.hpp"

namespace ffg {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr std::string_view kWhitespace = " \t\r\v\f";

std::string rstrip(std::string_view line) {
  auto end = line.find_last_not_of(kWhitespace);
  return end == std::string_view::npos ? std::string() : std::string(line.substr(0, end + 1));
}

// Fd owner; closes on destruction.
class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& o) noexcept : fd_(o.release()) {}
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = o.release();
    }
    return *this;
  }
  ~Fd() { reset(); }
  int get() const { return fd_; }
  int release() { return std::exchange(fd_, -1); }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }
  explicit operator bool() const { return fd_ >= 0; }

 private:
  int fd_ = -1;
};

struct Pipe {
  Fd read;
  Fd write;
};

Pipe make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw Error("pipe_failed", std::strerror(errno));
  return Pipe{Fd(fds[0]), Fd(fds[1])};
}

void ignore_sigpipe_once() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::optional<std::string> resolve_executable(const std::string& name) {
  auto runnable = [](const std::string& p) {
    struct stat st {};
    return ::stat(p.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(p.c_str(), X_OK) == 0;
  };
  if (name.find('/') != std::string::npos) {
    if (runnable(name)) return name;
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  std::stringstream dirs(path ? path : "/usr/local/bin:/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) dir = ".";
    std::string candidate = dir + "/" + name;
    if (runnable(candidate)) return candidate;
  }
  return std::nullopt;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

std::vector<std::string> expand_command(const RunnerProfile& profile, const std::string& source) {
  const auto cpu = static_cast<long long>(std::ceil(profile.limits.wall_time_seconds)) + 1;
  std::vector<std::string> argv;
  for (const auto& part : profile.command) {
    std::string arg = replace_all(part, "{source}", source);
    arg = replace_all(arg, "{cpu_seconds}", std::to_string(cpu));
    arg = replace_all(arg, "{memory_bytes}", std::to_string(profile.limits.memory_bytes));
    arg = replace_all(arg, "{max_output_bytes}", std::to_string(profile.limits.output_bytes));
    argv.push_back(std::move(arg));
  }
  return argv;
}

// Fixed wrapper for call-based problems: each non-empty stdin line is one
// JSON-encoded positional argument; the return value is printed with
// json.dumps on a single line.
std::string call_based_driver(const std::string& entry) {
  return "\n\n# --- call-based driver ---\n"
         "def __ffg_main():\n"
         "    import sys, json\n"
         "    args = [json.loads(l) for l in sys.stdin.read().splitlines() if l.strip()]\n"
         "    g = globals()\n"
         "    fn = g.get('" + entry + "')\n"
         "    if fn is None and 'Solution' in g:\n"
         "        fn = getattr(g['Solution'](), '" + entry + "')\n"
         "    result = fn(*args)\n"
         "    sys.stdout.write(json.dumps(result) + '\\n')\n"
         "__ffg_main()\n";
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "ffg-exec-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw Error("tempdir_failed", std::strerror(errno));
    path_ = tmpl;
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string write_source(const TempDir& dir, std::string_view program, const RunnerProfile& profile) {
  fs::path file = dir.path() / ("candidate" + profile.source_suffix);
  std::ofstream out(file, std::ios::binary);
  out << program;
  if (profile.io_mode == IoMode::call_based) out << call_based_driver(profile.call_entry);
  if (!out) throw Error("write_failed", "cannot write candidate source " + file.string());
  return file.string();
}

struct RawRun {
  ExecStatus status = ExecStatus::spawn_error;
  std::string stdout_bytes;
  double wall = 0.0;
};

std::optional<ExecStatus> parse_guard_status(const std::string& control) {
  std::istringstream in(control);
  std::string word, tag;
  int exit_code = 0;
  if (!(in >> word >> tag >> exit_code) || word != "STATUS") return std::nullopt;
  if (tag == "OK") return exit_code == 0 ? std::optional(ExecStatus::ok) : std::nullopt;
  if (tag == "TIMEOUT") return ExecStatus::timeout;
  if (tag == "RUNTIME_ERROR") return ExecStatus::runtime_error;
  if (tag == "OUTPUT_OVERFLOW") return ExecStatus::output_overflow;
  return std::nullopt;
}

// Moves `fd` to `target` in the child. Only async-signal-safe calls.
void child_install(int fd, int target) {
  if (fd == target) {
    int flags = ::fcntl(fd, F_GETFD);
    ::fcntl(fd, F_SETFD, flags & ~FD_CLOEXEC);
  } else {
    ::dup2(fd, target);
  }
}

RawRun run_process(const std::vector<std::string>& argv, std::string_view input,
                   const RunnerProfile& profile) {
  RawRun result;
  auto exe = resolve_executable(argv.at(0));
  if (!exe) return result;

  ignore_sigpipe_once();
  Pipe in = make_pipe();
  Pipe out = make_pipe();
  Pipe exec_err = make_pipe();
  Pipe control;
  if (profile.guarded) control = make_pipe();

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  const Limits& limits = profile.limits;
  const auto start = Clock::now();
  pid_t pid = ::fork();
  if (pid < 0) return result;
  if (pid == 0) {
    ::setpgid(0, 0);
    struct sigaction dfl {};
    dfl.sa_handler = SIG_DFL;
    ::sigaction(SIGPIPE, &dfl, nullptr);
    // Lift every fd we need above the standard slots first so the dup2
    // sequence below cannot clobber one of them.
    int fin = ::fcntl(in.read.get(), F_DUPFD_CLOEXEC, 10);
    int fout = ::fcntl(out.write.get(), F_DUPFD_CLOEXEC, 10);
    int fctl = profile.guarded ? ::fcntl(control.write.get(), F_DUPFD_CLOEXEC, 10) : -1;
    int devnull = ::open("/dev/null", O_WRONLY | O_CLOEXEC);
    child_install(fin, 0);
    child_install(fout, 1);
    if (devnull >= 0) child_install(devnull, 2);
    if (fctl >= 0) child_install(fctl, 3);
    if (!profile.guarded) {
      rlimit mem{static_cast<rlim_t>(limits.memory_bytes), static_cast<rlim_t>(limits.memory_bytes)};
      ::setrlimit(RLIMIT_AS, &mem);
      auto cpu_secs = static_cast<rlim_t>(std::ceil(limits.wall_time_seconds)) + 1;
      rlimit cpu{cpu_secs, cpu_secs + 1};
      ::setrlimit(RLIMIT_CPU, &cpu);
    }
    rlimit core{0, 0};
    ::setrlimit(RLIMIT_CORE, &core);
    ::execv(exe->c_str(), cargv.data());
    int err = errno;
    [[maybe_unused]] auto n = ::write(exec_err.write.get(), &err, sizeof err);
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  in.read.reset();
  out.write.reset();
  exec_err.write.reset();
  control.write.reset();

  ::fcntl(in.write.get(), F_SETFL, O_NONBLOCK);
  std::size_t written = 0;
  if (input.empty()) in.write.reset();

  std::string control_bytes;
  bool killed_timeout = false;
  bool killed_overflow = false;
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(limits.wall_time_seconds));
  const auto max_output = static_cast<std::size_t>(limits.output_bytes);
  char buf[65536];

  auto kill_group = [&] { ::kill(-pid, SIGKILL); };

  while (out.read || control.read) {
    auto now = Clock::now();
    if (now >= deadline) {
      killed_timeout = true;
      kill_group();
      break;
    }
    pollfd fds[3];
    int n = 0;
    int out_idx = -1, ctl_idx = -1, in_idx = -1;
    if (out.read) { fds[n] = {out.read.get(), POLLIN, 0}; out_idx = n++; }
    if (control.read) { fds[n] = {control.read.get(), POLLIN, 0}; ctl_idx = n++; }
    if (in.write) { fds[n] = {in.write.get(), POLLOUT, 0}; in_idx = n++; }
    auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1;
    int ready = ::poll(fds, n, static_cast<int>(std::min<long long>(wait_ms, 100)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t w = ::write(in.write.get(), input.data() + written, input.size() - written);
      if (w > 0) written += static_cast<std::size_t>(w);
      if (w < 0 && errno != EAGAIN) in.write.reset();
      if (written >= input.size()) in.write.reset();
    }
    if (out_idx >= 0 && (fds[out_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      ssize_t r = ::read(out.read.get(), buf, sizeof buf);
      if (r > 0) {
        result.stdout_bytes.append(buf, static_cast<std::size_t>(r));
        if (result.stdout_bytes.size() > max_output) {
          killed_overflow = true;
          kill_group();
          break;
        }
      } else if (r == 0 || errno != EAGAIN) {
        out.read.reset();
      }
    }
    if (ctl_idx >= 0 && (fds[ctl_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      ssize_t r = ::read(control.read.get(), buf, sizeof buf);
      if (r > 0 && control_bytes.size() < 4096) control_bytes.append(buf, static_cast<std::size_t>(r));
      else if (r <= 0) control.read.reset();
    }
  }
  in.write.reset();

  // Output is closed; the process may still be running (e.g. it closed
  // stdout early). Wait for it under the same deadline.
  int wstatus = 0;
  for (;;) {
    pid_t w = ::waitpid(pid, &wstatus, WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (Clock::now() >= deadline && !killed_timeout && !killed_overflow) {
      killed_timeout = true;
      kill_group();
    }
    if (killed_timeout || killed_overflow) {
      ::waitpid(pid, &wstatus, 0);
      break;
    }
    ::usleep(1000);
  }
  // Reap anything left in the group.
  ::kill(-pid, SIGKILL);
  result.wall = std::chrono::duration<double>(Clock::now() - start).count();

  int child_errno = 0;
  if (::read(exec_err.read.get(), &child_errno, sizeof child_errno) == sizeof child_errno) {
    result.status = ExecStatus::spawn_error;
    result.stdout_bytes.clear();
    return result;
  }

  if (killed_timeout) {
    result.status = ExecStatus::timeout;
  } else if (killed_overflow) {
    result.status = ExecStatus::output_overflow;
  } else if (profile.guarded) {
    auto tag = parse_guard_status(control_bytes);
    result.status = tag.value_or(ExecStatus::spawn_error);
  } else if (WIFEXITED(wstatus)) {
    result.status = WEXITSTATUS(wstatus) == 0 ? ExecStatus::ok : ExecStatus::runtime_error;
  } else if (WIFSIGNALED(wstatus) && WTERMSIG(wstatus) == SIGXCPU) {
    result.status = ExecStatus::timeout;
  } else {
    result.status = ExecStatus::runtime_error;
  }
  if (result.status != ExecStatus::ok) result.stdout_bytes.clear();
  return result;
}

std::string stdin_bytes(std::string_view input) {
  std::string s(input);
  if (!s.empty() && s.back() != '\n') s.push_back('\n');
  return s;
}

ExecutionRecord run_cell(const std::string& source_path, const RunnerProfile& profile,
                         std::string_view input) {
  RawRun raw = run_process(expand_command(profile, source_path), stdin_bytes(input), profile);
  ExecutionRecord rec;
  rec.status = raw.status;
  rec.wall_time_used = raw.wall;
  rec.input = std::string(input);
  if (raw.status == ExecStatus::ok) rec.stdout_canonical = normalize_output(raw.stdout_bytes);
  return rec;
}

std::optional<double> parse_float(std::string_view token) {
  std::string s(token);
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty() || errno == ERANGE || !std::isfinite(v))
    return std::nullopt;
  return v;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::optional<RunnerProfile> runner_preset(std::string_view name) {
  RunnerProfile p;
  if (name == "python") {
    p.name = "python";
    p.command = {"python3", "{source}"};
  } else if (name == "python-fast") {
    p.name = "python-fast";
    p.command = {"python3", "-I", "-S", "{source}"};
  } else if (name == "sh") {
    p.name = "sh";
    p.command = {"sh", "{source}"};
    p.source_suffix = ".sh";
  } else {
    return std::nullopt;
  }
  return p;
}

RunnerProfile with_guard(RunnerProfile profile, const std::string& guard_path) {
  profile.command = {guard_path, "{source}", "--cpu-seconds", "{cpu_seconds}", "--memory-bytes",
                     "{memory_bytes}", "--max-output-bytes", "{max_output_bytes}"};
  profile.guarded = true;
  return profile;
}

std::optional<std::string> validate_profile(const RunnerProfile& profile) {
  if (profile.command.empty()) return "command template is empty";
  if (!(profile.limits.wall_time_seconds > 0)) return "wall_time must be > 0";
  if (profile.limits.memory_bytes <= 0) return "memory must be > 0";
  if (profile.limits.output_bytes <= 0) return "output limit must be > 0";
  bool has_source = false;
  for (const auto& part : profile.command) has_source |= part.find("{source}") != std::string::npos;
  if (!has_source) return "command template lacks {source}";
  return std::nullopt;
}

bool same_outcome(const ExecutionRecord& a, const ExecutionRecord& b) {
  return a.problem_id == b.problem_id && a.sample_index == b.sample_index &&
         a.case_index == b.case_index && a.status == b.status &&
         a.stdout_canonical == b.stdout_canonical && a.input == b.input && a.model_tag == b.model_tag;
}

std::optional<std::string> validate_normalization(const NormalizationPolicy& policy) {
  if (policy.mode == NormalizationMode::token_float && !(policy.float_tolerance > 0))
    return "float_tolerance must be > 0 for token_float";
  return std::nullopt;
}

std::string normalize_output(std::string_view raw, const NormalizationPolicy&) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t nl = raw.find('\n', start);
    std::string_view line = raw.substr(start, nl == std::string_view::npos ? raw.size() - start : nl - start);
    lines.push_back(rstrip(line));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

std::string canonical_input(std::string_view raw) { return normalize_output(raw); }

bool outputs_equal(std::string_view a, std::string_view b, const NormalizationPolicy& policy) {
  if (a == b) return true;
  if (policy.mode == NormalizationMode::exact_canonical) return false;
  auto ta = tokens(a);
  auto tb = tokens(b);
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i] == tb[i]) continue;
    auto x = parse_float(ta[i]);
    auto y = parse_float(tb[i]);
    if (!x || !y || std::fabs(*x - *y) > policy.float_tolerance * (1 + 1e-9)) return false;
  }
  return true;
}

std::string to_string(ExecStatus status) {
  switch (status) {
    case ExecStatus::ok: return "ok";
    case ExecStatus::timeout: return "timeout";
    case ExecStatus::runtime_error: return "runtime_error";
    case ExecStatus::output_overflow: return "output_overflow";
    case ExecStatus::spawn_error: return "spawn_error";
  }
  return "spawn_error";
}

std::optional<ExecStatus> parse_exec_status(std::string_view s) {
  for (auto st : {ExecStatus::ok, ExecStatus::timeout, ExecStatus::runtime_error,
                  ExecStatus::output_overflow, ExecStatus::spawn_error})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

ExecutionRecord execute(std::string_view program, const RunnerProfile& profile,
                        std::string_view input) {
  if (auto err = validate_profile(profile)) throw ValidationError("bad_profile", "profile", *err);
  TempDir dir;
  return run_cell(write_source(dir, program, profile), profile, input);
}

std::vector<ExecutionRecord> ExecutionGrid::column(std::size_t col) const {
  std::vector<ExecutionRecord> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(at(r, col));
  return out;
}

std::vector<ExecutionRecord> ExecutionGrid::row(std::size_t r) const {
  return {cells_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          cells_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

ExecutionGrid execute_matrix(const std::vector<ProgramRef>& programs,
                             const std::vector<std::string>& inputs,
                             const RunnerProfile& profile, const MatrixOptions& options) {
  if (options.parallelism < 1)
    throw ValidationError("bad_parallelism", "parallelism", "parallelism must be >= 1");
  if (auto err = validate_profile(profile)) throw ValidationError("bad_profile", "profile", *err);

  ExecutionGrid grid(programs.size(), inputs.size());
  // Each program's source is written once and shared by its row.
  std::vector<std::unique_ptr<TempDir>> dirs(programs.size());
  std::vector<std::string> paths(programs.size());
  for (std::size_t r = 0; r < programs.size(); ++r) {
    if (!programs[r].source) continue;
    dirs[r] = std::make_unique<TempDir>();
    paths[r] = write_source(*dirs[r], *programs[r].source, profile);
  }

  std::atomic<std::size_t> spawn_failures{0};
  const std::size_t cells = programs.size() * inputs.size();
  parallel_for(cells, options.parallelism, [&](std::size_t cell) {
    const std::size_t r = cell / inputs.size();
    const std::size_t c = cell % inputs.size();
    ExecutionRecord rec;
    if (programs[r].source) {
      rec = run_cell(paths[r], profile, inputs[c]);
    } else {
      rec.status = ExecStatus::runtime_error;
      rec.input = inputs[c];
    }
    rec.problem_id = programs[r].problem_id;
    rec.sample_index = programs[r].sample_index;
    rec.model_tag = programs[r].model_tag;
    rec.case_index = static_cast<std::int64_t>(c);
    if (rec.status == ExecStatus::spawn_error &&
        spawn_failures.fetch_add(1) + 1 > options.spawn_failure_budget)
      throw HarnessBudgetError("spawn failures exceeded budget of " +
                               std::to_string(options.spawn_failure_budget) + " (runner " +
                               profile.command.front() + ")");
    grid.at(r, c) = std::move(rec);
  });
  return grid;
}

}  // namespace ffg
