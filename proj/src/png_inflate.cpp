// Copyright 2026 The pyratext authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License. You may
// obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <stdexcept>
#include <string>
#include <vector>

#include <zlib.h>

namespace ptx {
namespace {

struct InflateGuard {
  z_stream* zs;
  ~InflateGuard() { inflateEnd(zs); }
};

}  // namespace

std::vector<unsigned char> zlib_inflate(const std::vector<unsigned char>& in,
                                        size_t expected, const std::string& path) {
  std::vector<unsigned char> out(expected);
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw std::runtime_error(path + ": zlib init failed");
  InflateGuard guard{&zs};
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  if (rc != Z_STREAM_END) throw std::runtime_error(path + ": corrupt PNG stream");
  out.resize(zs.total_out);
  return out;
}

}  // namespace ptx
