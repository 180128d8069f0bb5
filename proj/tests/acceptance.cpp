#include <cstdio>
#include <cstdlib>
#include <string>

#include "loggas/verify.hpp"

int main(int argc, char** argv) {
  loggas::VerifyOptions opt;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--fast") opt.fast = true;
  }
  if (const char* t = std::getenv("LOGGAS_THREADS")) opt.threads = static_cast<unsigned>(std::atoi(t));
  const auto rep = loggas::run_verification(opt);
  int failed = 0;
  for (const auto& c : rep.checks) {
    std::printf("criterion %2d %s: %s\n", c.id, c.pass ? "PASS" : "FAIL", loggas::format_line(c).c_str());
    if (!c.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(rep.checks.size()) - failed, rep.checks.size());
  return failed == 0 ? 0 : 1;
}
