def evenFilter(n: list[int]) -> list[int]:
    out = []
    for x in n:
        if x % 2 == 0:
            out.append(x)
    return out
