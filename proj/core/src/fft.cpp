#include "graphkdv/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace graphkdv {
namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_plan(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(n));
  fftw_plan p = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(key, p);
  return p;
}

void execute(std::vector<cplx>& data, int sign) {
  if (data.empty()) return;
  fftw_plan p = get_plan(static_cast<int>(data.size()), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, ptr, ptr);
}

}  // namespace

void fft_forward(std::vector<cplx>& data) { execute(data, FFTW_FORWARD); }

void fft_inverse(std::vector<cplx>& data) {
  execute(data, FFTW_BACKWARD);
  const double s = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= s;
}

std::vector<double> fft_frequencies(int n, double d) {
  std::vector<double> w(static_cast<size_t>(n));
  const double base = 2.0 * std::numbers::pi / (n * d);
  for (int k = 0; k < n; ++k) w[k] = base * (k <= (n - 1) / 2 ? k : k - n);
  if (n % 2 == 0) w[n / 2] = -base * (n / 2);
  return w;
}

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(long n) {
  long p = 1;
  while (p < n) p <<= 1;
  return static_cast<int>(p);
}

}  // namespace graphkdv
