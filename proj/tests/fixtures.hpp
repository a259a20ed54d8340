#pragma once

#include <string>
#include <vector>

// Molecular integral fixtures and their exact active-space ground energies
// (full CI in the active space, computed when the files were generated).
namespace fixtures {

struct Molecule {
  std::string file;
  double exact_energy;
};

inline std::string path(const std::string& file) { return std::string(QCCILC_TEST_DATA) + "/" + file; }

inline const std::vector<Molecule>& all() {
  static const std::vector<Molecule> list = {
      {"h2_sto3g_0.74.fcidump", -1.1372838344885023},
      {"lih_sto3g_cas23_1.0.fcidump", -7.768621768038494},
      {"lih_sto3g_cas23_1.6.fcidump", -7.8629193366292665},
      {"lih_sto3g_cas23_2.4.fcidump", -7.785972909005586},
      {"lih_sto3g_cas23_3.0.fcidump", -7.72709298859579},
      {"lih_sto3g_cas23_4.0.fcidump", -7.749393702587763},
      {"h2o_631g_cas44_1.00.fcidump", -75.98217709728088},
      {"h2o_631g_cas44_2.35.fcidump", -75.74411220768872},
  };
  return list;
}

}  // namespace fixtures
