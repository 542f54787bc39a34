// One PASS/FAIL line per acceptance criterion. The directional run (10) only
// happens when GSEARCH_DIRECTIONAL is set; GSEARCH_WORKERS sets its workers.
#include <cstdio>
#include <algorithm>
#include <cstdlib>
#include <string>

#include "gsearch/verify.hpp"
#include "gsearch_golden.hpp"

namespace {

void print(const gsearch::verify::CriterionResult& r) {
  std::printf("%s  %2d  %-44s %8.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
              r.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  namespace v = gsearch::verify;
  int failed = 0;
  v::run_gating(gsearch::golden::kReportCsv, gsearch::golden::kReportMd, [&](const v::CriterionResult& r) {
    print(r);
    failed += !r.passed;
  });
  if (const char* on = std::getenv("GSEARCH_DIRECTIONAL"); on && *on && std::string(on) != "0") {
    v::DirectionalOptions o;
    if (const char* w = std::getenv("GSEARCH_WORKERS")) o.workers = std::max(1, std::atoi(w));
    if (const char* out = std::getenv("GSEARCH_DIRECTIONAL_OUT")) o.out = out;
    std::string md;
    const auto r = v::directional(o, &md);
    print(r);
    std::printf("%s", md.c_str());
  } else {
    std::printf("SKIP  10  directional reproduction (set GSEARCH_DIRECTIONAL=1)\n");
  }
  return failed ? 1 : 0;
}
