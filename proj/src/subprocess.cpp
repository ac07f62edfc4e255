#include "invforge/subprocess.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

namespace invforge::proc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

bool executable(const std::string& path) {
  struct stat st{};
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) &&
         ::access(path.c_str(), X_OK) == 0;
}

}  // namespace

std::string find_on_path(const std::string& name) {
  if (name.empty())
    return "";
  if (name.find('/') != std::string::npos)
    return executable(name) ? name : "";
  const char* path = std::getenv("PATH");
  if (!path)
    return "";
  std::string dirs(path);
  std::size_t start = 0;
  while (start <= dirs.size()) {
    std::size_t sep = dirs.find(':', start);
    std::string dir = dirs.substr(
        start, sep == std::string::npos ? std::string::npos : sep - start);
    if (!dir.empty()) {
      std::string full = dir + "/" + name;
      if (executable(full))
        return full;
    }
    if (sep == std::string::npos)
      break;
    start = sep + 1;
  }
  return "";
}

result run(const std::vector<std::string>& argv, const limits& lim,
           const std::string& workdir) {
  result res;
  if (argv.empty()) {
    res.error = "empty command line";
    return res;
  }

  int fds[2];
  if (::pipe(fds) != 0) {
    res.error = std::string("pipe: ") + std::strerror(errno);
    return res;
  }

  const auto start = std::chrono::steady_clock::now();
  pid_t pid = ::fork();
  if (pid < 0) {
    res.error = std::string("fork: ") + std::strerror(errno);
    ::close(fds[0]);
    ::close(fds[1]);
    return res;
  }

  if (pid == 0) {
    ::setsid();  // own process group so a timeout kill reaps grandchildren
    ::close(fds[0]);
    ::dup2(fds[1], STDOUT_FILENO);
    ::dup2(fds[1], STDERR_FILENO);
    ::close(fds[1]);
    if (!workdir.empty() && ::chdir(workdir.c_str()) != 0)
      _exit(126);
    if (lim.memory_bytes > 0) {
      rlimit rl{lim.memory_bytes, lim.memory_bytes};
      ::setrlimit(RLIMIT_AS, &rl);
    }
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv)
      cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    ::execvp(cargv[0], cargv.data());
    ::dprintf(STDERR_FILENO, "exec %s: %s\n", cargv[0], std::strerror(errno));
    _exit(127);
  }

  res.started = true;
  ::close(fds[1]);

  char buf[4096];
  pollfd pfd{fds[0], POLLIN, 0};
  bool open = true;
  while (open) {
    int wait_ms = 200;
    if (lim.wall_seconds > 0) {
      double left = lim.wall_seconds - seconds_since(start);
      if (left <= 0) {
        res.timed_out = true;
        ::kill(-pid, SIGKILL);
        break;
      }
      wait_ms = std::min(wait_ms, static_cast<int>(left * 1000) + 1);
    }
    int n = ::poll(&pfd, 1, wait_ms);
    if (n < 0) {
      if (errno == EINTR)
        continue;
      break;
    }
    if (n == 0)
      continue;
    ssize_t got = ::read(fds[0], buf, sizeof buf);
    if (got > 0)
      res.output.append(buf, static_cast<std::size_t>(got));
    else
      open = false;  // EOF: every writer closed the pipe
  }

  // drain whatever was written before a timeout kill
  for (;;) {
    ssize_t got = ::read(fds[0], buf, sizeof buf);
    if (got <= 0)
      break;
    res.output.append(buf, static_cast<std::size_t>(got));
  }
  ::close(fds[0]);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  res.wall_seconds = seconds_since(start);
  if (WIFEXITED(status))
    res.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    res.exit_code = -WTERMSIG(status);
  return res;
}

}  // namespace invforge::proc
