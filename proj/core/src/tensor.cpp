/*
 * Copyright 2026 The WrinkleForge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "wrinkleforge/tensor.hpp"

namespace wrinkleforge {

template <typename Real>
BasicTensor4<Real> stack_images(std::span<const Image> images) {
  if (images.empty()) return {};
  const Image& first = images.front();
  BasicTensor4<Real> out(static_cast<int>(images.size()), first.channels(), first.height(), first.width());
  for (std::size_t n = 0; n < images.size(); ++n) {
    const Image& img = images[n];
    if (img.channels() != first.channels() || img.height() != first.height() || img.width() != first.width())
      throw Error(ErrorCode::ShapeMismatch, "stack_images: images differ in shape");
    for (int c = 0; c < img.channels(); ++c)
      for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
          out.at(static_cast<int>(n), c, y, x) = static_cast<Real>(img(y, x, c));
  }
  return out;
}

template BasicTensor4<float> stack_images<float>(std::span<const Image>);
template BasicTensor4<double> stack_images<double>(std::span<const Image>);

}  // namespace wrinkleforge
