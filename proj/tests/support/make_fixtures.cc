// Copyright (c) 2026 ocrkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Writes the synthetic two-column page and its recorded stub fixtures:
//   <dir>/page.png, <dir>/models/<task>/<key>/*.tensor, <dir>/models/charset.txt

#include <filesystem>
#include <iostream>

#include "ocrkit/error.h"
#include "synthetic.h"

int main(int argc, char **argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  try {
    std::filesystem::remove_all(dir / "models");
    const ocrkit::Image page =
        ocrkit::testing::GenerateFixtures(ocrkit::testing::TwoColumnScene(), dir / "models");
    ocrkit::WritePng(page, dir / "page.png");
  } catch (const ocrkit::Error &e) {
    std::cerr << "make_fixtures: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
