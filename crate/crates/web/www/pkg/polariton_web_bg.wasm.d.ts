/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_densityview_free: (a: number, b: number) => void;
export const amplitudeProfile: (a: number, b: number, c: number) => [number, number, number, number];
export const densityMap: (a: number, b: number, c: number, d: number) => [number, number, number];
export const densityview_extent: (a: number) => [number, number];
export const densityview_norm: (a: number) => number;
export const densityview_photon: (a: number) => [number, number];
export const densityview_size: (a: number) => number;
export const densityview_spinWave: (a: number) => [number, number];
export const efficiencyCurve: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const optimalSeparation: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
