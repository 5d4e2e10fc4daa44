/* tslint:disable */
/* eslint-disable */

/**
 * A validated oval with a single Fourier mode of perturbation.
 */
export class Billiard {
    free(): void;
    [Symbol.dispose](): void;
    melnikov(m: number, n: number, grid: number): Melnikov;
    constructor(surface: string, rho0: number, j: number, re: number, im: number, epsilon: number);
    orbit(theta0: number, psi0: number, steps: number): Float64Array;
    outline(samples: number): Float64Array;
    phasePortrait(theta0: number, orbits: number, steps: number): Float64Array;
}

export class Melnikov {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly constant: number;
    readonly numerical: Float64Array;
    readonly predicted: Float64Array;
    readonly thetas: Float64Array;
    readonly verdict: string;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_billiard_free: (a: number, b: number) => void;
    readonly __wbg_melnikov_free: (a: number, b: number) => void;
    readonly billiard_melnikov: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly billiard_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly billiard_orbit: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly billiard_outline: (a: number, b: number) => [number, number];
    readonly billiard_phasePortrait: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly melnikov_constant: (a: number) => number;
    readonly melnikov_numerical: (a: number) => [number, number];
    readonly melnikov_predicted: (a: number) => [number, number];
    readonly melnikov_thetas: (a: number) => [number, number];
    readonly melnikov_verdict: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
