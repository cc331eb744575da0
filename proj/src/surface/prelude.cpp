#include "lmd/prelude.hpp"

#include "lmd/surface.hpp"

namespace lmd {

std::string_view prelude_source() {
    return "type Int :: *;\n"
           "type Bool :: *;\n"
           "type Vector :: Pi n:Int. *;\n"
           "const true : Bool;\n"
           "const false : Bool;\n"
           "const add : Int -> Int -> Int;\n"
           "const sub : Int -> Int -> Int;\n"
           "const mul : Int -> Int -> Int;\n"
           "const eq : Int -> Int -> Bool;\n"
           "const nil : Vector 0;\n"
           "const cons : Pi n:Int. Int -> Vector n -> Vector (n + 1);\n"
           "const head : Pi n:Int. Vector (n + 1) -> Int;\n"
           "const tail : Pi n:Int. Vector (n + 1) -> Vector n;\n";
}

Signature prelude_signature() {
    static const Signature sig = parse_signature(prelude_source());
    return sig;
}

}  // namespace lmd
