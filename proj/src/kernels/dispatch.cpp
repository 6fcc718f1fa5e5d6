#include <cstdlib>
#include <string_view>

#include "castor/kernels.hpp"

namespace castor::kernels {

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
#if defined(CASTOR_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) {
    tables.push_back(&detail::avx2_table());
  }
#endif
#if defined(CASTOR_HAVE_NEON)
  tables.push_back(&detail::neon_table());
#endif
  return tables;
}

namespace {

const KernelTable& select_table() {
  const auto tables{available_tables()};
  if (const char* requested{std::getenv("CASTOR_KERNELS")}) {
    for (const KernelTable* table : tables) {
      if (table->name == std::string_view{requested}) {
        return *table;
      }
    }
  }
  return *tables.back();
}

}  // namespace

const KernelTable& active_table() {
  static const KernelTable& table{select_table()};
  return table;
}

}  // namespace castor::kernels
