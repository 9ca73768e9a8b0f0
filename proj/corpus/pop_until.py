def popUntil(n: list[int], k: int) -> int:
    while len(n) > 0 and n[-1] > k:
        n.pop()
    return len(n)
