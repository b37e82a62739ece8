#include <pybind11/pybind11.h>

PYBIND11_MODULE(equimod, m) { m.doc() = "equimod bindings (stub)"; }
