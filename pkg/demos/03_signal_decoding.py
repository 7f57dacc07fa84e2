"""From orientation samples to identifier bits.

The camera samples each displayed symbol seven times (10 ms frames, 70 ms
bits).  A sliding window over the last seven orientation estimates feeds a
Schmitt trigger: crossing above 4 emits a 1, below 2 emits a 0, and a held
level is re-emitted on a seven-frame clock so runs of equal bits survive.
"""

from irbeacon import DecoderState, count_identifier_bits, decode_bits, generate_codebook

book = generate_codebook()
beacon_id = "010100100110"

# Encode: each bit held for seven frames, starting mid-stream at bit 5 to
# show that no synchronization is needed.
phase = 5
stream = beacon_id[phase:] + beacon_id * 2 + beacon_id[:phase]
samples = [int(b) for b in stream for _ in range(7)]

state = DecoderState()
for frame, s in enumerate(samples):
    emitted = state.step(s, frame)
    if emitted is not None and len(state.bits) <= 8:
        kind = "transition" if frame in state.transition_frames else "repetition"
        print(f"frame {frame:>3}: window sum {sum(state.window)} -> emit {emitted} ({kind})")

decoded = state.bit_string
print(f"\ndecoded {len(decoded)} bits: {decoded}")

result = decode_bits(decoded, book, state.emit_frames)
print(f"matched entry:    {result.matched.bits}")
print(f"aligned rotation: {result.matched_rotation}")
print(f"occurrences at bit positions {result.occurrences}")
print(f"correct {result.correct_bits}, errors {result.error_bits}")

# Error accounting on a noisy example: occurrences are consumed left to
# right; leading/trailing fragments of the identifier still count.
noisy = "11001000010011001010001001100100001"
correct, error, occ = count_identifier_bits(noisy, "000100110010")
print(f"\nnoisy stream {noisy}")
print(f"identifier occurrences at {occ}; correct {correct}, error bits {error}")
