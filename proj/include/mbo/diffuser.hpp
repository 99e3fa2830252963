#pragma once

#include "mbo/field.hpp"

namespace mbo {

// A linear smoothing operator e^{tau Delta} acting entrywise on matrix fields.
class Diffuser {
 public:
  virtual ~Diffuser() = default;
  virtual double tau() const = 0;
  virtual MatrixField apply(const MatrixField& f) const = 0;
};

}  // namespace mbo
