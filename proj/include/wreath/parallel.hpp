#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <vector>

#include "wreath/perm.hpp"

namespace wreath {

// Runs body(chunk) for chunk in [0, chunks) on up to `workers` threads.
// The first exception thrown by any chunk is rethrown after all threads join.
template <class Body>
void parallel_chunks(int chunks, int workers, Body&& body) {
  workers = std::max(1, std::min(workers, chunks));
  if (workers == 1) {
    for (int c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        int c = next.fetch_add(1);
        if (c >= chunks) return;
        try {
          body(c);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(chunks);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Every permutation of the given degree whose image of point 1 is
// first_image (1-based), in lexicographic order of image arrays.
template <class Visit>
void for_each_permutation_with_first(int degree, int first_image, Visit&& visit) {
  std::vector<int> rest;
  for (int p = 0; p < degree; ++p)
    if (p != first_image - 1) rest.push_back(p);
  std::vector<int> img(static_cast<std::size_t>(degree));
  img[0] = first_image - 1;
  do {
    std::copy(rest.begin(), rest.end(), img.begin() + 1);
    visit(Permutation::from_images0(img));
  } while (std::next_permutation(rest.begin(), rest.end()));
}

template <class Visit>
void for_each_permutation(int degree, Visit&& visit) {
  for (int f = 1; f <= degree; ++f) for_each_permutation_with_first(degree, f, visit);
}

}  // namespace wreath
