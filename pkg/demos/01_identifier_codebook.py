"""Beacon identifiers that survive endless repetition.

A beacon loops its 12-bit identifier forever with no synchronization
marker, so a receiver can lock on at any bit offset.  Identifiers must
therefore be distinct under every cyclic shift, and must not collide with
shifted copies of themselves.  This script walks through the usable
identifier set.
"""

from irbeacon import canonical_rotation, generate_codebook, is_ambiguous, rotations, save_codebook

# Period-4 strings illustrate the self-collision problem: repeating either
# of these two produces literally the same infinite signal.
print("is_ambiguous('001100110011') ->", is_ambiguous("001100110011"))
print("is_ambiguous('110011001100') ->", is_ambiguous("110011001100"))
print("same canonical class:",
      canonical_rotation("001100110011") == canonical_rotation("110011001100"))

# A single 1 breaks every rotation.
print("is_ambiguous('000000000001') ->", is_ambiguous("000000000001"))

# The full codebook: one representative per aperiodic cyclic class.
book = generate_codebook()
print(f"\nusable identifiers: {len(book)} of 4096 bit patterns")
print("first entries:", ", ".join(e.bits for e in book.entries[:4]))
print("last entry:   ", book.entries[-1].bits)

# The three field-test identifiers are all members (membership is cyclic,
# the stored representative may be a rotation of the assigned code).
for bits in ("000100110010", "010100100110", "000101010100"):
    entry = book.contains_cyclic(bits)
    print(f"{bits} -> stored as {entry.bits}")

# Every rotation of every entry stays unique across the whole book.
seen = {}
for entry in book:
    for rot in rotations(entry.bits):
        assert rot not in seen
        seen[rot] = entry.bits
print(f"\n{len(seen)} rotations, all distinct")

save_codebook(book, "codebook.txt")
print("wrote codebook.txt")
