// Copyright 2026 The ecadd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Adds a few points on y^2 = x^3 + 7 over F_17 with the reversible adder and
// prints the Toffoli cost of the circuit.

#include <iostream>

#include "ecadd/cost.hpp"
#include "ecadd/ec_add.hpp"

int main() {
    ecadd::CurveParams curve(17, 0, 7);
    ecadd::AffinePoint Q{1, 5};
    auto circuit = ecadd::build_ec_add(curve, Q);

    for (ecadd::AffinePoint P : {ecadd::AffinePoint{2, 10}, ecadd::AffinePoint{1, 5}, ecadd::kIdentity}) {
        auto run = ecadd::run_ec_add(circuit, curve, P);
        std::cout << P.str() << " + " << Q.str() << " = " << run.result.str()
                  << (run.clean ? "" : "  [dirty: " + run.violation_register + "]") << "\n";
    }

    auto report = ecadd::census(circuit);
    std::cout << "Toffoli cost: " << ecadd::toffoli_cost(circuit).str() << "\n";
    std::cout << "peak ancilla: " << ecadd::peak_ancilla(circuit).str() << "\n";
    for (const auto &[family, count] : report.totals) {
        std::cout << "  " << family << " " << count << "\n";
    }
}
