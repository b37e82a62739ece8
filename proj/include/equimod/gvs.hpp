#pragma once

// Finitely supported graded rational vector spaces, degrees 0..cap.

#include <vector>

namespace equimod {

struct GVS {
  int cap = 0;
  std::vector<int> dims;  // size cap+1

  GVS() : dims(1, 0) {}
  explicit GVS(int cap_) : cap(cap_), dims(cap_ + 1, 0) {}

  int dim(int k) const {
    return (k >= 0 && k <= cap) ? dims[k] : 0;
  }
  int total_dim() const {
    int t = 0;
    for (int d : dims) t += d;
    return t;
  }
  bool operator==(const GVS& o) const { return cap == o.cap && dims == o.dims; }
};

}  // namespace equimod
