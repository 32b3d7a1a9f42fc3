#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "atlas/perturbation.hpp"

namespace atlas {

// Line protocol over a child process. Each request line is "modulus argument", each reply
// line holds the n*n entries in row-major order as "re im re im ...". Requests are batched;
// every reply must arrive within the timeout.
class SubprocessEvaluator {
 public:
  SubprocessEvaluator(std::string command, int n, double timeout_seconds = 5.0);
  ~SubprocessEvaluator();
  SubprocessEvaluator(const SubprocessEvaluator&) = delete;
  SubprocessEvaluator& operator=(const SubprocessEvaluator&) = delete;

  void operator()(const std::vector<CoverPoint>& pts, std::vector<CMatrix>& out);
  long calls() const { return calls_; }

 private:
  void start();
  void stop();
  std::string command_;
  int n_;
  double timeout_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string pending_;
  std::mutex mu_;
  long calls_ = 0;
};

Perturbation subprocess_perturbation(const std::string& command, int n, DecayBound bound,
                                     double timeout_seconds = 5.0);

}  // namespace atlas
