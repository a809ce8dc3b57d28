// Copyright The fav authors
// SPDX-License-Identifier: Apache-2.0

// Times the parallel brute force against its serial reference.

#include <chrono>
#include <iostream>

#include <omp.h>

#include "fav/casestudy.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fav;
  ProductLine line = load_line(argc > 1 ? std::filesystem::path(argv[1]) : bundled_email_manifest());
  std::vector<ProductTask> par, ser;
  double tp = seconds([&] { par = verify_brute_force(line); });
  double ts = seconds([&] { ser = verify_brute_force_serial(line); });

  bool same = par.size() == ser.size();
  for (std::size_t i = 0; same && i < par.size(); ++i)
    same = par[i].product == ser[i].product && par[i].automaton == ser[i].automaton &&
           par[i].verdict.kind == ser[i].verdict.kind && par[i].verdict.label == ser[i].verdict.label &&
           par[i].metrics.states_explored == ser[i].metrics.states_explored;

  std::cout << "checks   " << par.size() << '\n'
            << "threads  " << omp_get_max_threads() << '\n'
            << "serial   " << ts << " s\n"
            << "parallel " << tp << " s\n"
            << "speedup  " << (tp > 0 ? ts / tp : 0) << '\n'
            << "results  " << (same ? "identical" : "DIFFERENT") << '\n';
  return same ? 0 : 1;
}
