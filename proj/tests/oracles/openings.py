"""Brute-force action counts of initial positions, and the confidence radius
for 500 wins and 500 losses."""
import math


def breakthrough_initial_moves(rows, cols):
    # First player's pieces fill rows 0 and 1 and move towards higher rows;
    # straight moves need an empty square, diagonal moves an empty or enemy one.
    board = {}
    for c in range(cols):
        board[(0, c)] = board[(1, c)] = 'x'
        board[(rows - 1, c)] = board[(rows - 2, c)] = 'o'
    n = 0
    for (r, c), p in board.items():
        if p != 'x':
            continue
        for dc in (-1, 0, 1):
            t = (r + 1, c + dc)
            if not (0 <= t[1] < cols):
                continue
            q = board.get(t)
            if q is None or (dc != 0 and q == 'o'):
                n += 1
    return n


def othello_initial_moves():
    b = {(3, 3): 'o', (3, 4): 'x', (4, 3): 'x', (4, 4): 'o'}
    n = 0
    for r in range(8):
        for c in range(8):
            if (r, c) in b:
                continue
            ok = False
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    if dr == dc == 0:
                        continue
                    rr, cc, seen = r + dr, c + dc, 0
                    while b.get((rr, cc)) == 'o':
                        rr, cc, seen = rr + dr, cc + dc, seen + 1
                    if seen and b.get((rr, cc)) == 'x':
                        ok = True
            n += ok
    return n


if __name__ == '__main__':
    print('breakthrough 6x6', breakthrough_initial_moves(6, 6))
    print('breakthrough 8x8', breakthrough_initial_moves(8, 8))
    print('othello 8x8', othello_initial_moves())
    scores = [1] * 500 + [-1] * 500
    m = sum(scores) / 1000
    sd = math.sqrt(sum((s - m) ** 2 for s in scores) / 999)
    print('radius', repr(1.96 * sd / math.sqrt(1000)))
