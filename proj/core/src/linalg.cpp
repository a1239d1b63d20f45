#include "virann/types.hpp"

namespace virann {

double op_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace virann
