#include "atlas/evaluator.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace atlas {

SubprocessEvaluator::SubprocessEvaluator(std::string command, int n, double timeout_seconds)
    : command_(std::move(command)), n_(n), timeout_(timeout_seconds) {
  start();
}

SubprocessEvaluator::~SubprocessEvaluator() { stop(); }

void SubprocessEvaluator::start() {
  int in[2], out[2];
  if (pipe(in) != 0 || pipe(out) != 0) throw input_error("cannot create pipes for the evaluator");
  pid_t pid = fork();
  if (pid < 0) throw input_error("cannot fork the evaluator");
  if (pid == 0) {
    dup2(in[0], 0);
    dup2(out[1], 1);
    close(in[0]);
    close(in[1]);
    close(out[0]);
    close(out[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  pid_ = pid;
  to_child_ = in[1];
  from_child_ = out[0];
  signal(SIGPIPE, SIG_IGN);
}

void SubprocessEvaluator::stop() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    for (int k = 0; k < 50; ++k) {
      if (waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      usleep(2000);
    }
    kill(pid_, SIGKILL);
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

void SubprocessEvaluator::operator()(const std::vector<CoverPoint>& pts, std::vector<CMatrix>& out) {
  std::lock_guard<std::mutex> lock(mu_);
  out.assign(pts.size(), CMatrix::Zero(n_, n_));
  std::string request;
  char buf[96];
  for (auto& p : pts) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.modulus, p.argument);
    request += buf;
  }
  size_t written = 0, received = 0;
  auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_);
  while (received < pts.size()) {
    pollfd fds[2];
    int nf = 0;
    fds[nf++] = {from_child_, POLLIN, 0};
    if (written < request.size()) fds[nf++] = {to_child_, POLLOUT, 0};
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw input_error("evaluator timed out after " + std::to_string(timeout_) + " s");
    int r = poll(fds, nf, static_cast<int>(left.count()));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw input_error("poll failed while talking to the evaluator");
    }
    if (r == 0) throw input_error("evaluator timed out after " + std::to_string(timeout_) + " s");
    if (nf == 2 && (fds[1].revents & POLLOUT)) {
      size_t chunk = std::min<size_t>(request.size() - written, 4096);
      ssize_t w = write(to_child_, request.data() + written, chunk);
      if (w < 0 && errno != EAGAIN) throw input_error("evaluator closed its input");
      if (w > 0) written += static_cast<size_t>(w);
    }
    if (fds[0].revents & (POLLIN | POLLHUP)) {
      char rb[8192];
      ssize_t g = read(from_child_, rb, sizeof rb);
      if (g <= 0) throw input_error("evaluator exited before answering");
      pending_.append(rb, static_cast<size_t>(g));
      size_t pos;
      while (received < pts.size() && (pos = pending_.find('\n')) != std::string::npos) {
        std::istringstream is(pending_.substr(0, pos));
        pending_.erase(0, pos + 1);
        CMatrix& m = out[received];
        for (int i = 0; i < n_; ++i)
          for (int j = 0; j < n_; ++j) {
            double re, im;
            if (!(is >> re >> im)) throw input_error("malformed evaluator reply");
            m(i, j) = {re, im};
          }
        ++received;
        // each reply restarts the per-call timeout
        deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_);
      }
    }
  }
  calls_ += static_cast<long>(pts.size());
}

Perturbation subprocess_perturbation(const std::string& command, int n, DecayBound bound, double timeout_seconds) {
  auto ev = std::make_shared<SubprocessEvaluator>(command, n, timeout_seconds);
  BatchEvaluator f = [ev](const std::vector<CoverPoint>& pts, std::vector<CMatrix>& out) {
    // keep batches bounded so a slow child never holds a huge backlog
    const size_t chunk = 2048;
    out.clear();
    std::vector<CMatrix> part;
    for (size_t s = 0; s < pts.size(); s += chunk) {
      std::vector<CoverPoint> sub(pts.begin() + s, pts.begin() + std::min(pts.size(), s + chunk));
      (*ev)(sub, part);
      out.insert(out.end(), part.begin(), part.end());
    }
  };
  return Perturbation::black_box(n, f, bound);
}

}  // namespace atlas
