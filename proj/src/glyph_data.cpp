#include "podinv/sources.hpp"

namespace podinv::glyph_data {

// identical to assets/glyphs16.txt (checked by a unit test)
const char* kGlyphs16 = R"glyphs(# 16x16 uppercase glyph bitmaps, row 0 = top, '1' = ink
A
0000000000000000
0000001111000000
0000001111000000
0000111111110000
0000111111110000
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011111111111100
0011111111111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0000000000000000
B
0000000000000000
0111111111111000
0111111111111000
0001111000011110
0001111000011110
0001111000011110
0001111000011110
0001111111111000
0001111111111000
0001111000011110
0001111000011110
0001111000011110
0001111000011110
0111111111111000
0111111111111000
0000000000000000
C
0000000000000000
0000011111111000
0000011111111000
0001111000011110
0001111000011110
0111100000000000
0111100000000000
0111100000000000
0111100000000000
0111100000000000
0111100000000000
0001111000011110
0001111000011110
0000011111111000
0000011111111000
0000000000000000
D
0000000000000000
0111111111100000
0111111111100000
0001111001111000
0001111001111000
0001111000011110
0001111000011110
0001111000011110
0001111000011110
0001111000011110
0001111000011110
0001111001111000
0001111001111000
0111111111100000
0111111111100000
0000000000000000
E
0000000000000000
0111111111111110
0111111111111110
0001111000000110
0001111000000110
0001111001100000
0001111001100000
0001111111100000
0001111111100000
0001111001100000
0001111001100000
0001111000000110
0001111000000110
0111111111111110
0111111111111110
0000000000000000
F
0000000000000000
0111111111111110
0111111111111110
0001111000000110
0001111000000110
0001111001100000
0001111001100000
0001111111100000
0001111111100000
0001111001100000
0001111001100000
0001111000000000
0001111000000000
0111111110000000
0111111110000000
0000000000000000
G
0000000000000000
0000011111111000
0000011111111000
0001111000011110
0001111000011110
0111100000000000
0111100000000000
0111100000000000
0111100000000000
0111100001111110
0111100001111110
0001111000011110
0001111000011110
0000011111111110
0000011111111110
0000000000000000
H
0000000000000000
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011111111111100
0011111111111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0000000000000000
I
0000000000000000
0000111111110000
0000111111110000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000111111110000
0000111111110000
0000000000000000
J
0000000000000000
0000000111111110
0000000111111110
0000000001111000
0000000001111000
0000000001111000
0000000001111000
0000000001111000
0000000001111000
0111100001111000
0111100001111000
0111100001111000
0111100001111000
0001111111100000
0001111111100000
0000000000000000
K
0000000000000000
0111111000011110
0111111000011110
0001111000011110
0001111000011110
0001111001111000
0001111001111000
0001111111100000
0001111111100000
0001111001111000
0001111001111000
0001111000011110
0001111000011110
0111111000011110
0111111000011110
0000000000000000
L
0000000000000000
0111111110000000
0111111110000000
0001111000000000
0001111000000000
0001111000000000
0001111000000000
0001111000000000
0001111000000000
0001111000000110
0001111000000110
0001111000011110
0001111000011110
0111111111111110
0111111111111110
0000000000000000
M
0000000000000000
0111100000011110
0111100000011110
0111111001111110
0111111001111110
0111111111111110
0111111111111110
0111111111111110
0111111111111110
0111100110011110
0111100110011110
0111100000011110
0111100000011110
0111100000011110
0111100000011110
0000000000000000
N
0000000000000000
0111100000011110
0111100000011110
0111111000011110
0111111000011110
0111111110011110
0111111110011110
0111100111111110
0111100111111110
0111100001111110
0111100001111110
0111100000011110
0111100000011110
0111100000011110
0111100000011110
0000000000000000
O
0000000000000000
0000011111100000
0000011111100000
0001111001111000
0001111001111000
0111100000011110
0111100000011110
0111100000011110
0111100000011110
0111100000011110
0111100000011110
0001111001111000
0001111001111000
0000011111100000
0000011111100000
0000000000000000
P
0000000000000000
0111111111111000
0111111111111000
0001111000011110
0001111000011110
0001111000011110
0001111000011110
0001111111111000
0001111111111000
0001111000000000
0001111000000000
0001111000000000
0001111000000000
0111111110000000
0111111110000000
0000000000000000
Q
0000000000000000
0000111111110000
0000111111110000
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110011111100
0011110011111100
0000111111110000
0000111111110000
0000000011111100
0000000011111100
0000000000000000
R
0000000000000000
0111111111111000
0111111111111000
0001111000011110
0001111000011110
0001111000011110
0001111000011110
0001111111111000
0001111111111000
0001111001111000
0001111001111000
0001111000011110
0001111000011110
0111111000011110
0111111000011110
0000000000000000
S
0000000000000000
0000111111110000
0000111111110000
0011110000111100
0011110000111100
0011111100000000
0011111100000000
0000111111000000
0000111111000000
0000000011111100
0000000011111100
0011110000111100
0011110000111100
0000111111110000
0000111111110000
0000000000000000
T
0000000000000000
0011111111111100
0011111111111100
0011001111001100
0011001111001100
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000111111110000
0000111111110000
0000000000000000
U
0000000000000000
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011111111111100
0011111111111100
0000000000000000
V
0000000000000000
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0000111111110000
0000111111110000
0000001111000000
0000001111000000
0000000000000000
W
0000000000000000
0111100000011110
0111100000011110
0111100000011110
0111100000011110
0111100000011110
0111100000011110
0111100110011110
0111100110011110
0111111111111110
0111111111111110
0111111001111110
0111111001111110
0111100000011110
0111100000011110
0000000000000000
X
0000000000000000
0111100000011110
0111100000011110
0111100000011110
0111100000011110
0001111001111000
0001111001111000
0000011111100000
0000011111100000
0000011111100000
0000011111100000
0001111001111000
0001111001111000
0111100000011110
0111100000011110
0000000000000000
Y
0000000000000000
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0011110000111100
0000111111110000
0000111111110000
0000001111000000
0000001111000000
0000001111000000
0000001111000000
0000111111110000
0000111111110000
0000000000000000
Z
0000000000000000
0111111111111110
0111111111111110
0111100000011110
0111100000011110
0110000001111000
0110000001111000
0000000111100000
0000000111100000
0000011110000110
0000011110000110
0001111000011110
0001111000011110
0111111111111110
0111111111111110
0000000000000000
)glyphs";

}  // namespace podinv::glyph_data
