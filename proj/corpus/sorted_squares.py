def sortedSquares(n: list[int]) -> list[int]:
    out = []
    i = 0
    while i < len(n):
        v = n[i]
        if v < 0:
            v = -v
        out.append(v * v)
        i = i + 1
    return out
