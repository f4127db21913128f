#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

int main(int argc, char** argv) {
  // Hermetic on-disk cache for the whole run unless the caller pinned one.
  if (!std::getenv("CBM_CACHE_DIR")) {
    auto dir = std::filesystem::temp_directory_path() / "cbm-unit-cache";
    setenv("CBM_CACHE_DIR", dir.string().c_str(), 1);
  }
  doctest::Context context(argc, argv);
  return context.run();
}
